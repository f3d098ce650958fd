//! Weighted-blow-up weight systems.
//!
//! Given the two branch multiplicities `m1(b)`, `m2(b)` of a two-branch germ
//! as affine forms in the crepant parameter `b`, a weighted blow-up with
//! weights `(alpha, beta)` extracts a curve of discrepancy `1/theta - 1`
//! exactly when
//!
//! ```text
//! alpha*(1 - m1(b)) + beta*(1 - m2(b)) = 1/theta.
//! ```
//!
//! `solve_blowup_weights` enumerates all solutions with `b` in a half-open
//! interval, `gcd(alpha, beta) = 1` and `1 <= theta <= theta_max`, optionally
//! restricted to `alpha >= beta + 1` (the extracted curve must not be a
//! (-1)-curve on the minimal resolution). The enumeration is finite because
//! `1 - m_i` stays bounded below by a positive rational on the closed hull
//! of the interval; intervals must be pre-split at sign changes of `1 - m_i`.

use crate::affine::AffineForm;
use crate::rat::{int, Rat};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupWeights {
    pub alpha: u64,
    pub beta: u64,
    pub theta: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct WeightConstraints {
    /// Require `alpha >= beta + 1`.
    pub alpha_dominant: bool,
    pub theta_max: u64,
}

impl Default for WeightConstraints {
    fn default() -> Self {
        WeightConstraints {
            alpha_dominant: false,
            theta_max: 6,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WeightError {
    #[error("no klt solutions: a branch multiplicity reaches 1 on the range")]
    NoKltSolutions,
    #[error("empty range")]
    EmptyRange,
    #[error("equation degenerates to an identity on the whole range")]
    AmbiguousParameter,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// All `(weights, b)` with `alpha*(1-m1(b)) + beta*(1-m2(b)) = 1/theta` and
/// `b` in `[lo, hi)`. Ordered by `theta` descending, then `alpha`, `beta`
/// ascending.
pub fn solve_blowup_weights(
    m1: &AffineForm,
    m2: &AffineForm,
    lo: &Rat,
    hi: &Rat,
    constraints: WeightConstraints,
) -> Result<Vec<(BlowupWeights, Rat)>, WeightError> {
    if lo >= hi {
        return Err(WeightError::EmptyRange);
    }
    let one = AffineForm::constant_form(crate::rat::one());
    let f1 = &one - m1; // 1 - m1(b)
    let f2 = &one - m2;
    // Positive lower bounds on the closed hull [lo, hi].
    let inf = |f: &AffineForm| -> Rat {
        let a = f.eval(lo);
        let b = f.eval(hi);
        if a <= b {
            a
        } else {
            b
        }
    };
    let inf1 = inf(&f1);
    let inf2 = inf(&f2);
    if inf1 <= crate::rat::zero() || inf2 <= crate::rat::zero() {
        return Err(WeightError::NoKltSolutions);
    }
    let mut out = Vec::new();
    for theta in (1..=constraints.theta_max).rev() {
        let target = crate::rat::rat(1, theta as i64);
        // alpha * inf1 < 1/theta bounds alpha; same for beta.
        let amax = crate::rat::to_i64(&crate::rat::floor_int(&(&target / &inf1))).max(0) as u64;
        let bmax = crate::rat::to_i64(&crate::rat::floor_int(&(&target / &inf2))).max(0) as u64;
        for alpha in 1..=amax {
            for beta in 1..=bmax {
                if gcd(alpha, beta) != 1 {
                    continue;
                }
                if constraints.alpha_dominant && alpha < beta + 1 {
                    continue;
                }
                let lhs = &f1.scale(&int(alpha as i64)) + &f2.scale(&int(beta as i64));
                let eq = &lhs - &AffineForm::constant_form(target.clone());
                match eq.solve_zero() {
                    crate::affine::ZeroSolution::Root(b) => {
                        if *lo <= b && b < *hi {
                            out.push((BlowupWeights { alpha, beta, theta }, b));
                        }
                    }
                    crate::affine::ZeroSolution::AllValues => {
                        return Err(WeightError::AmbiguousParameter)
                    }
                    crate::affine::ZeroSolution::NoSolution => {}
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::af;
    use crate::rat::rat;

    #[test]
    fn single_solution_system() {
        // m1 = 7/3 - 2b, m2 = 5/6 on [6/7, 1) with alpha dominant:
        // exactly (2,1), theta = 1, b = 7/8.
        let sols = solve_blowup_weights(
            &af(7, 3, -2, 1),
            &af(5, 6, 0, 1),
            &rat(6, 7),
            &rat(1, 1),
            WeightConstraints {
                alpha_dominant: true,
                theta_max: 6,
            },
        )
        .unwrap();
        assert_eq!(
            sols,
            vec![(
                BlowupWeights {
                    alpha: 2,
                    beta: 1,
                    theta: 1
                },
                rat(7, 8)
            )]
        );
    }

    #[test]
    fn eight_solution_system() {
        // m1 = 5/2 - 2b, m2 = 7/2 - 3b on [37/42, 1): one theta = 2 solution
        // and seven theta = 1 weight pairs.
        let sols = solve_blowup_weights(
            &af(5, 2, -2, 1),
            &af(7, 2, -3, 1),
            &rat(37, 42),
            &rat(1, 1),
            WeightConstraints::default(),
        )
        .unwrap();
        let expect: Vec<((u64, u64, u64), Rat)> = vec![
            ((1, 1, 2), rat(9, 10)),
            ((1, 2, 1), rat(15, 16)),
            ((1, 3, 1), rat(10, 11)),
            ((1, 4, 1), rat(25, 28)),
            ((1, 5, 1), rat(15, 17)),
            ((2, 1, 1), rat(13, 14)),
            ((2, 3, 1), rat(23, 26)),
            ((3, 1, 1), rat(8, 9)),
        ];
        let got: Vec<((u64, u64, u64), Rat)> = sols
            .iter()
            .map(|(w, b)| ((w.alpha, w.beta, w.theta), b.clone()))
            .collect();
        for e in &expect {
            assert!(got.contains(e), "missing {e:?}");
        }
        assert_eq!(got.len(), expect.len());
        // theta = 2 comes first, then theta = 1 ordered by (alpha, beta).
        assert_eq!(got[0].0, (1, 1, 2));
    }

    #[test]
    fn no_solution_when_multiplicities_vanish() {
        // m1 = m2 = 0: alpha + beta = 1/theta has no positive solutions.
        let sols = solve_blowup_weights(
            &af(0, 1, 0, 1),
            &af(0, 1, 0, 1),
            &rat(6, 7),
            &rat(1, 1),
            WeightConstraints::default(),
        )
        .unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn swap_symmetry() {
        let m1 = af(5, 2, -2, 1);
        let m2 = af(7, 2, -3, 1);
        let a = solve_blowup_weights(&m1, &m2, &rat(37, 42), &rat(1, 1), Default::default())
            .unwrap();
        let b = solve_blowup_weights(&m2, &m1, &rat(37, 42), &rat(1, 1), Default::default())
            .unwrap();
        let mut a_sw: Vec<((u64, u64, u64), Rat)> = a
            .iter()
            .map(|(w, b)| ((w.beta, w.alpha, w.theta), b.clone()))
            .collect();
        let mut b_raw: Vec<((u64, u64, u64), Rat)> = b
            .iter()
            .map(|(w, b)| ((w.alpha, w.beta, w.theta), b.clone()))
            .collect();
        a_sw.sort();
        b_raw.sort();
        assert_eq!(a_sw, b_raw);
    }

    #[test]
    fn back_substitution_is_exact() {
        let m1 = af(5, 2, -2, 1);
        let m2 = af(7, 2, -3, 1);
        let one = AffineForm::constant_form(crate::rat::one());
        for (w, b) in
            solve_blowup_weights(&m1, &m2, &rat(37, 42), &rat(1, 1), Default::default()).unwrap()
        {
            let lhs = &(&one - &m1).scale(&int(w.alpha as i64))
                + &(&one - &m2).scale(&int(w.beta as i64));
            assert_eq!(lhs.eval(&b), rat(1, w.theta as i64));
        }
    }

    #[test]
    fn non_klt_range_rejected() {
        // m1 = 3/2 constant is >= 1 on the whole range.
        assert_eq!(
            solve_blowup_weights(
                &af(3, 2, 0, 1),
                &af(0, 1, 0, 1),
                &rat(6, 7),
                &rat(1, 1),
                Default::default()
            ),
            Err(WeightError::NoKltSolutions)
        );
    }
}
