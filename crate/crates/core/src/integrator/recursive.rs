use super::{EvalStats, IntegralResult, Limits};
use crate::cyclotomic::CyclotomicValue;
use crate::error::{Error, Result};
use crate::padic::{Angle, PAdicScalar, PhasePolynomial, Valuation};

/// Which vanishing rule fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanishingRule {
    /// A single linear term with `|a_1| > 1`.
    LinearTerm,
    /// `|a_1| > p` and `|a_1| > |j a_j|` for every `j > 1`.
    DominantLinear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitBranch {
    pub residue: u64,
    /// Angle of `χ(f(residue))`.
    pub phase: Angle,
    /// `g(x) = sum_{j>=1} b_j(residue) p^j x^j`.
    pub child: PhasePolynomial,
}

/// One step of the reduction, for a phase without constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionOutcome {
    /// The phase is integral on the unit ball; the integral is `χ(phase)`.
    Constant { phase: Angle },
    /// The integral is exactly zero.
    VanishLinear { rule: VanishingRule },
    /// `I(f) = p^-1 I(child)` with `child(x) = f(p x)`.
    Rescale { child: PhasePolynomial },
    /// `I(f) = p^-1 sum_y χ(f(y)) I(g_y)` over residues `y mod p`.
    Split { branches: Vec<SplitBranch> },
}

/// Picks the first applicable rule: constant, vanishing, rescale, split.
///
/// Rules are tested on the oscillating part of `f` (terms with `|a_j| > 1`),
/// which has the same unit-ball integral.
pub fn reduce_step(f: &PhasePolynomial) -> Result<ReductionOutcome> {
    let ctx = f.ctx();
    let g = f.oscillating_part();
    let Some(degree) = g.degree() else {
        return Ok(ReductionOutcome::Constant {
            phase: f.constant_term().character_angle()?,
        });
    };

    if degree == 1 {
        return Ok(ReductionOutcome::VanishLinear {
            rule: VanishingRule::LinearTerm,
        });
    }
    let linear = g.weighted_valuation(1);
    if linear < Valuation::Finite(-1) && (2..=degree).all(|j| g.weighted_valuation(j) > linear) {
        return Ok(ReductionOutcome::VanishLinear {
            rule: VanishingRule::DominantLinear,
        });
    }

    let profile = g.dominance_profile();
    if let (Some(m), Some(r)) = (profile.m, profile.r) {
        let top = Valuation::Finite(-r);
        if r > 2 && (1..=degree).all(|j| j == m || g.weighted_valuation(j) > top) {
            return Ok(ReductionOutcome::Rescale {
                child: g.scale_argument(&PAdicScalar::prime_power(1, ctx)),
            });
        }
    }

    let p_scalar = PAdicScalar::prime_power(1, ctx);
    let branches = (0..ctx.p())
        .map(|y| {
            let b = g.taylor_shift(&PAdicScalar::from_integer(y, ctx));
            Ok(SplitBranch {
                residue: y,
                phase: b.constant_term().character_angle()?,
                child: b.without_constant().scale_argument(&p_scalar),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ReductionOutcome::Split { branches })
}

/// Exact unit-ball integral by recursive application of [`reduce_step`].
///
/// The coset modulus `N(f)` drops by at least one at every rescale or split,
/// so the recursion depth is at most `N(f)`; this is asserted at each step.
pub fn recursive_integrate(f: &PhasePolynomial, limits: &Limits) -> Result<IntegralResult> {
    let mut stats = EvalStats::default();
    let g = f.without_constant();
    let outcome = reduce_step(&g)?;
    if matches!(outcome, ReductionOutcome::VanishLinear { .. }) {
        stats.vanish_linear += 1;
        return Ok(IntegralResult {
            value: CyclotomicValue::zero(f.ctx()),
            stats,
        });
    }
    let phase = f.constant_term().character_angle()?;
    stats.character_evaluations += 1;
    let mut eval = Evaluator {
        limits,
        stats: &mut stats,
    };
    let value = eval.apply(&g, outcome, 0)?.rotate(&phase)?;
    Ok(IntegralResult { value, stats })
}

struct Evaluator<'a> {
    limits: &'a Limits,
    stats: &'a mut EvalStats,
}

impl Evaluator<'_> {
    fn eval(&mut self, f: &PhasePolynomial, depth: u32) -> Result<CyclotomicValue> {
        if depth > self.limits.depth_cap {
            return Err(Error::DepthExceeded(self.limits.depth_cap));
        }
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let outcome = reduce_step(f)?;
        self.apply(f, outcome, depth)
    }

    fn apply(
        &mut self,
        f: &PhasePolynomial,
        outcome: ReductionOutcome,
        depth: u32,
    ) -> Result<CyclotomicValue> {
        let ctx = f.ctx();
        match outcome {
            ReductionOutcome::Constant { phase } => {
                self.stats.constant += 1;
                Ok(CyclotomicValue::from_angle(&phase))
            }
            ReductionOutcome::VanishLinear { .. } => {
                self.stats.vanish_linear += 1;
                Ok(CyclotomicValue::zero(ctx))
            }
            ReductionOutcome::Rescale { child } => {
                self.stats.rescale += 1;
                check_descent(f, &child)?;
                Ok(self.eval(&child, depth + 1)?.rescale(-1))
            }
            ReductionOutcome::Split { branches } => {
                self.stats.split += 1;
                let mut parts = Vec::with_capacity(branches.len());
                for branch in &branches {
                    check_descent(f, &branch.child)?;
                    self.stats.character_evaluations += 1;
                    let v = self.eval(&branch.child, depth + 1)?;
                    if !v.is_zero() {
                        parts.push(v.rotate(&branch.phase)?);
                    }
                }
                Ok(CyclotomicValue::sum(ctx, &parts).rescale(-1))
            }
        }
    }
}

fn check_descent(parent: &PhasePolynomial, child: &PhasePolynomial) -> Result<()> {
    let before = parent.coset_modulus_exp() as i64;
    let after = child.coset_modulus_exp() as i64;
    if after < before {
        Ok(())
    } else {
        Err(Error::TerminationViolated {
            parent: before,
            child: after,
        })
    }
}
