//! Building blocks of the modular semantics: set aggregation, aggregation
//! and influence functions, and the kernels that combine them.
//!
//! Every function that folds a multiset sorts it first, so results do not
//! depend on the order in which attackers or supporters are listed.

use std::fmt;

use serde::{Deserialize, Serialize};

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn sorted_sum(values: &[f64]) -> f64 {
    sorted(values).into_iter().fold(0.0, |acc, x| acc + x)
}

fn sorted_product(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().collect();
    v.sort_by(f64::total_cmp);
    v.into_iter().fold(1.0, |acc, x| acc * x)
}

/// Set aggregation function: strength of an attacking or supporting set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetAgg {
    Sum,
    Prod,
    Min,
    Max,
}

impl SetAgg {
    pub const ALL: [SetAgg; 4] = [SetAgg::Sum, SetAgg::Prod, SetAgg::Min, SetAgg::Max];

    pub fn eval(self, s: &[f64]) -> f64 {
        match self {
            SetAgg::Sum => sorted_sum(s),
            SetAgg::Prod => sorted_product(s.iter().copied()),
            SetAgg::Min => s.iter().copied().fold(1.0, f64::min),
            SetAgg::Max => s.iter().copied().fold(0.0, f64::max),
        }
    }

    /// Largest output on inputs from `[0, 1]`; unbounded for `Sum`.
    pub fn max_value(self) -> f64 {
        match self {
            SetAgg::Sum => f64::INFINITY,
            SetAgg::Prod | SetAgg::Min | SetAgg::Max => 1.0,
        }
    }
}

/// Aggregation function over attacker and supporter strengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Agg {
    Sum,
    Prod,
}

impl Agg {
    /// Negative values mean the attackers dominate, positive the supporters.
    pub fn eval(self, attackers: &[f64], supporters: &[f64]) -> f64 {
        match self {
            Agg::Sum => sorted_sum(supporters) - sorted_sum(attackers),
            Agg::Prod => {
                sorted_product(attackers.iter().map(|a| 1.0 - a))
                    - sorted_product(supporters.iter().map(|s| 1.0 - s))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfluenceKind {
    Linear,
    /// Quadratic energy with the support term `b·h(w/k)` and
    /// `h(x) = max(0,x)² / (1 + max(0,x))²`. Can leave `[0, 1]`.
    QuadraticEnergyPrinted,
    /// Quadratic energy with support term `(1-b)·h(w/k)` and
    /// `h(x) = max(0,x)² / (1 + max(0,x)²)`.
    QuadraticEnergyStandard,
}

/// Lipschitz constant of `x ↦ x²/(1+x²)` on `x ≥ 0`, attained at `x = 1/√3`.
pub const QE_STANDARD_H_LIPSCHITZ: f64 = 0.649_519_052_838_329;

/// Lipschitz constant of `x ↦ x²/(1+x)²` on `x ≥ 0`, attained at `x = 1/2`.
pub const QE_PRINTED_H_LIPSCHITZ: f64 = 8.0 / 27.0;

/// Influence function with conservativeness parameter `k > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Influence {
    pub kind: InfluenceKind,
    pub k: f64,
}

impl Influence {
    pub fn linear(k: f64) -> Self {
        Influence {
            kind: InfluenceKind::Linear,
            k,
        }
    }

    pub fn quadratic_energy(k: f64) -> Self {
        Influence {
            kind: InfluenceKind::QuadraticEnergyStandard,
            k,
        }
    }

    pub fn quadratic_energy_printed(k: f64) -> Self {
        Influence {
            kind: InfluenceKind::QuadraticEnergyPrinted,
            k,
        }
    }

    pub fn eval(&self, base: f64, w: f64) -> f64 {
        let k = self.k;
        match self.kind {
            InfluenceKind::Linear => {
                base + (base / k) * w.min(0.0) + ((1.0 - base) / k) * w.max(0.0)
            }
            InfluenceKind::QuadraticEnergyPrinted => {
                let h = |x: f64| {
                    let p = x.max(0.0);
                    p * p / ((1.0 + p) * (1.0 + p))
                };
                base - base * h(-w / k) + base * h(w / k)
            }
            InfluenceKind::QuadraticEnergyStandard => {
                let h = |x: f64| {
                    let p = x.max(0.0);
                    p * p / (1.0 + p * p)
                };
                base - base * h(-w / k) + (1.0 - base) * h(w / k)
            }
        }
    }

    /// Lipschitz constant in the aggregate argument, for bases in `[0, 1]`.
    pub fn lipschitz(&self) -> f64 {
        match self.kind {
            InfluenceKind::Linear => 1.0 / self.k,
            InfluenceKind::QuadraticEnergyStandard => QE_STANDARD_H_LIPSCHITZ / self.k,
            InfluenceKind::QuadraticEnergyPrinted => QE_PRINTED_H_LIPSCHITZ / self.k,
        }
    }
}

/// A `(ζ, α, ι)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    pub zeta: SetAgg,
    pub alpha: Agg,
    pub iota: Influence,
}

impl Kernel {
    /// DF-QuAD: product aggregation with linear influence.
    pub fn dfquad(zeta: SetAgg) -> Self {
        Kernel {
            zeta,
            alpha: Agg::Prod,
            iota: Influence::linear(1.0),
        }
    }

    /// Quadratic energy: sum aggregation with quadratic-energy influence.
    pub fn quadratic_energy(zeta: SetAgg) -> Self {
        Kernel {
            zeta,
            alpha: Agg::Sum,
            iota: Influence::quadratic_energy(1.0),
        }
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.iota.k = k;
        self
    }
}

/// Whether the kernel belongs to the elementary class: ζ ∈ {Prod, Min},
/// any α, and ι linear or standard quadratic energy.
pub fn is_elementary(kernel: &Kernel) -> bool {
    matches!(kernel.zeta, SetAgg::Prod | SetAgg::Min)
        && matches!(kernel.alpha, Agg::Sum | Agg::Prod)
        && matches!(
            kernel.iota.kind,
            InfluenceKind::Linear | InfluenceKind::QuadraticEnergyStandard
        )
}

/// Named semantics selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    Dfq,
    Qe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QeVariant {
    #[default]
    Standard,
    Printed,
}

impl Semantics {
    pub fn kernel(self, zeta: SetAgg, k: f64, qe: QeVariant) -> Kernel {
        match self {
            Semantics::Dfq => Kernel::dfquad(zeta).with_k(k),
            Semantics::Qe => Kernel {
                zeta,
                alpha: Agg::Sum,
                iota: match qe {
                    QeVariant::Standard => Influence::quadratic_energy(k),
                    QeVariant::Printed => Influence::quadratic_energy_printed(k),
                },
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownName(pub String);

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown name `{}`", self.0)
    }
}

impl std::error::Error for UnknownName {}

macro_rules! names {
    ($ty:ty { $($name:literal => $variant:expr),+ $(,)? }) => {
        impl std::str::FromStr for $ty {
            type Err = $crate::kernels::UnknownName;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err($crate::kernels::UnknownName(other.to_string())),
                }
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                let name = match self {
                    $(v if *v == $variant => $name,)+
                    _ => unreachable!(),
                };
                f.write_str(name)
            }
        }
    };
}
pub(crate) use names;

names!(SetAgg { "sum" => SetAgg::Sum, "prod" => SetAgg::Prod, "min" => SetAgg::Min, "max" => SetAgg::Max });
names!(Agg { "sum" => Agg::Sum, "prod" => Agg::Prod });
names!(Semantics { "dfq" => Semantics::Dfq, "qe" => Semantics::Qe });
names!(QeVariant { "standard" => QeVariant::Standard, "printed" => QeVariant::Printed });
