//! Local pairs: a cyclic quotient (or smooth) point with boundary branches.
//!
//! A branch is given by its coefficient and its shape in the germ's
//! coordinates `(x, y)` (weights `(q, 1)`):
//!
//! - `Axis1` / `Axis2`: the coordinate axes `{x=0}`, `{y=0}`;
//! - `Tangent{axis:1, order:m}`: a smooth branch `x + y^m = 0`, tangent to
//!   `{x=0}` (symmetrically for axis 2);
//! - `Cusp{p, q}`: a branch `x^p + y^q = 0`.
//!
//! For a monomial (lattice) valuation `v = (x, y)` the branch value is the
//! min of the monomial values, and the log discrepancy of the pair is
//!
//! ```text
//! l(v) = x + y - sum_i c_i * val_i(v)
//! ```
//!
//! `l` is piecewise linear on the quadrant; the pair is klt at the point iff
//! `l > 0` on every extreme ray of the linearity cones. A divisor is "deep"
//! for threshold `c` when its discrepancy `l - 1` is `<= -c`, i.e.
//! `l <= 1 - c`; for the classification threshold `c = 6/7` this is
//! `l <= 1/7`.
//!
//! Deep divisors over a germ are found by complete enumeration of lattice
//! valuations, plus one level of recursion at the break ray of each non-axis
//! branch (the intersection of the corresponding exceptional curve with the
//! strict transform is again a two-branch germ, now normal crossing). Over a
//! point of the new exceptional curve carrying a single transverse branch of
//! coefficient `< 1` no divisor can be deep, so the recursion is complete
//! for the thresholds used here.

use crate::affine::AffineForm;
use crate::cyclic::{CyclicError, CyclicQuot, LatticeValuation};
use crate::rat::{int, rat, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum BranchShape {
    Axis1,
    Axis2,
    Tangent { axis: u8, order: u32 },
    Cusp { x_pow: u32, y_pow: u32 },
}

impl BranchShape {
    pub fn is_axis(&self) -> bool {
        matches!(self, BranchShape::Axis1 | BranchShape::Axis2)
    }

    /// Monomial value of the branch under weights `(x, y)`.
    pub fn value(&self, x: &Rat, y: &Rat) -> Rat {
        match self {
            BranchShape::Axis1 => x.clone(),
            BranchShape::Axis2 => y.clone(),
            BranchShape::Tangent { axis: 1, order } => min(x.clone(), y * int(*order as i64)),
            BranchShape::Tangent { axis: _, order } => min(y.clone(), x * int(*order as i64)),
            BranchShape::Cusp { x_pow, y_pow } => {
                min(x * int(*x_pow as i64), y * int(*y_pow as i64))
            }
        }
    }

    /// Direction `(a, b)` along which the two monomials of the branch value
    /// agree; `None` for axes.
    pub fn break_ray(&self) -> Option<(u64, u64)> {
        match self {
            BranchShape::Axis1 | BranchShape::Axis2 => None,
            BranchShape::Tangent { axis: 1, order } => Some((*order as u64, 1)),
            BranchShape::Tangent { axis: _, order } => Some((1, *order as u64)),
            BranchShape::Cusp { x_pow, y_pow } => {
                let g = gcd(*x_pow as u64, *y_pow as u64);
                Some((*y_pow as u64 / g, *x_pow as u64 / g))
            }
        }
    }

    /// Local intersection multiplicity with another branch through the same
    /// point, on the smooth cover (divide by n downstairs). Generic position
    /// is assumed for coincident shapes.
    pub fn cover_mult(&self, other: &BranchShape) -> u64 {
        use BranchShape::*;
        let tangent_order = |s: &BranchShape, axis: u8| -> Option<u64> {
            match s {
                Axis1 if axis == 1 => Some(u64::MAX),
                Axis2 if axis == 2 => Some(u64::MAX),
                Tangent { axis: a, order } if *a == axis => Some(*order as u64),
                _ => None,
            }
        };
        // Two branches tangent to the same axis meet with the smaller order.
        for axis in [1u8, 2] {
            if let (Some(a), Some(b)) = (tangent_order(self, axis), tangent_order(other, axis)) {
                let m = a.min(b);
                if m != u64::MAX {
                    return m;
                }
                // Two copies of the same axis never arise (distinct curves).
                unreachable!("two identical axis branches");
            }
        }
        match (self, other) {
            (Axis1, Axis2) | (Axis2, Axis1) => 1,
            (Axis1, Tangent { .. }) | (Tangent { .. }, Axis1) => 1,
            (Axis2, Tangent { .. }) | (Tangent { .. }, Axis2) => 1,
            (Axis1, Cusp { y_pow, .. }) | (Cusp { y_pow, .. }, Axis1) => *y_pow as u64,
            (Axis2, Cusp { x_pow, .. }) | (Cusp { x_pow, .. }, Axis2) => *x_pow as u64,
            (Tangent { .. }, Tangent { .. }) => 1,
            _ => panic!("unsupported branch pair {self:?} / {other:?}"),
        }
    }
}

fn min(a: Rat, b: Rat) -> Rat {
    if a <= b {
        a
    } else {
        b
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub coeff: AffineForm,
    pub shape: BranchShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Germ {
    pub quot: CyclicQuot,
    pub branches: Vec<Branch>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GermError {
    #[error("pair is not klt at the point (l = {0} along a ray)")]
    NotKlt(String),
    #[error("more than one branch has coefficient >= 6/7")]
    SeveralLargeBranches,
    #[error("no branch has coefficient >= 6/7")]
    NoLargeBranch,
    #[error("tangent or cusp branch at a singular point is outside the classification")]
    UnclassifiableShape,
    #[error("recursion depth cap exceeded")]
    RecursionCap,
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
}

/// Germ with coefficients evaluated at a parameter value.
#[derive(Clone, Debug)]
struct EvalGerm {
    quot: CyclicQuot,
    branches: Vec<(Rat, BranchShape)>,
}

impl Germ {
    pub fn new(quot: CyclicQuot, branches: Vec<Branch>) -> Self {
        Germ { quot, branches }
    }

    fn eval(&self, p: &Rat) -> EvalGerm {
        EvalGerm {
            quot: self.quot,
            branches: self
                .branches
                .iter()
                .map(|b| (b.coeff.eval(p), b.shape))
                .collect(),
        }
    }
}

impl EvalGerm {
    fn ell(&self, x: &Rat, y: &Rat) -> Rat {
        let mut l = x + y;
        for (c, shape) in &self.branches {
            l = l - c * shape.value(x, y);
        }
        l
    }

    /// Extreme rays of the linearity cones: the axes plus every break ray.
    fn rays(&self) -> Vec<(Rat, Rat)> {
        let mut rays = vec![
            (crate::rat::one(), crate::rat::zero()),
            (crate::rat::zero(), crate::rat::one()),
        ];
        for (_, shape) in &self.branches {
            if let Some((a, b)) = shape.break_ray() {
                rays.push((int(a as i64), int(b as i64)));
            }
        }
        rays
    }

    /// Minimum of `l` over the rays, normalized by `x + y`; positive iff the
    /// pair is klt at the point.
    fn ray_floor(&self) -> Rat {
        let mut floor: Option<Rat> = None;
        for (x, y) in self.rays() {
            let l = self.ell(&x, &y);
            let norm = &l / &(&x + &y);
            floor = Some(match floor {
                None => norm,
                Some(f) => min(f, norm),
            });
        }
        floor.expect("at least the two axis rays")
    }

    fn check_klt(&self) -> Result<Rat, GermError> {
        let f = self.ray_floor();
        if f <= Rat::zero() {
            Err(GermError::NotKlt(crate::rat::fmt_rat(&f)))
        } else {
            Ok(f)
        }
    }

    fn is_lc(&self) -> bool {
        self.ray_floor() >= Rat::zero()
    }

    /// All primitive interior lattice valuations with `l <= threshold`.
    fn enumerate_deep(&self, threshold: &Rat) -> Result<Vec<(LatticeValuation, Rat)>, GermError> {
        let floor = self.check_klt()?;
        // l(v) >= floor * (x + y), so x + y <= threshold / floor.
        let n = self.quot.n;
        let sum_max = crate::rat::to_i64(&crate::rat::floor_int(
            &(&(threshold / &floor) * &int(n as i64)),
        ))
        .max(0);
        let mut out = Vec::new();
        for i in 1..sum_max {
            for j in 1..=(sum_max - i) {
                if n > 1 && (i as u128 % n as u128) != (self.quot.q as u128 * j as u128) % n as u128
                {
                    continue;
                }
                let v = LatticeValuation::new(rat(i, n as i64), rat(j, n as i64));
                if !self.quot.is_primitive(&v) {
                    continue;
                }
                let l = self.ell(&v.x, &v.y);
                if l <= *threshold {
                    out.push((v, l));
                }
            }
        }
        out.sort_by(|a, b| (a.0.x.clone(), a.0.y.clone()).cmp(&(b.0.x.clone(), b.0.y.clone())));
        Ok(out)
    }

    /// Global monomial minimum of `l` (value, witness), ties broken by
    /// lexicographic `(x, y)`.
    fn monomial_min(&self) -> Result<(Rat, LatticeValuation), GermError> {
        self.check_klt()?;
        let n = self.quot.n;
        let base = if self.quot.is_smooth() {
            LatticeValuation::new(int(1), int(1))
        } else {
            LatticeValuation::new(rat(self.quot.q as i64, n as i64), rat(1, n as i64))
        };
        let l0 = self.ell(&base.x, &base.y);
        let mut best = (l0.clone(), base);
        for (v, l) in self.enumerate_deep(&l0)? {
            if l < best.0 || (l == best.0 && (v.x.clone(), v.y.clone()) < (best.1.x.clone(), best.1.y.clone())) {
                best = (l, v);
            }
        }
        Ok(best)
    }

    /// The primitive lattice point along a break direction `(a, b)`.
    fn lattice_ray_point(&self, a: u64, b: u64) -> LatticeValuation {
        let n = self.quot.n;
        for k in 1..=n {
            if (k as u128 * a as u128) % n as u128
                == (self.quot.q as u128 * (k as u128 * b as u128)) % n as u128
            {
                return LatticeValuation::new(
                    rat((k * a) as i64, n as i64),
                    rat((k * b) as i64, n as i64),
                );
            }
        }
        unreachable!("k = n always satisfies the congruence")
    }

    /// Sub-germs produced by the one-step recursion: for each non-axis
    /// branch, the germ at the intersection of the break-ray exceptional
    /// curve with the strict transform of the branch. With multiplicity for
    /// branches whose cover splits into several strict-transform points.
    fn recursion_sites(&self) -> Vec<(EvalGerm, u64, LatticeValuation)> {
        let mut out = Vec::new();
        for (c, shape) in &self.branches {
            let Some((a, b)) = shape.break_ray() else {
                continue;
            };
            let v = self.lattice_ray_point(a, b);
            let l = self.ell(&v.x, &v.y);
            let copies = match shape {
                BranchShape::Cusp { x_pow, y_pow } => gcd(*x_pow as u64, *y_pow as u64),
                _ => 1,
            };
            let sub = EvalGerm {
                quot: CyclicQuot::smooth(),
                branches: vec![
                    (&crate::rat::one() - &l, BranchShape::Axis1),
                    (c.clone(), BranchShape::Axis2),
                ],
            };
            out.push((sub, copies, v));
        }
        out
    }
}

/// Witness for a deep divisor or a minimal-discrepancy valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationWitness {
    /// Monomial weights of the valuation in the germ coordinates; nested
    /// witnesses are prefixed by the break-ray weights they sit over.
    pub path: Vec<LatticeValuation>,
    /// Log discrepancy `l`; the discrepancy is `l - 1`.
    #[serde(with = "crate::affine::rat_str")]
    pub log_discrepancy: Rat,
}

fn count_deep_eval(
    g: &EvalGerm,
    threshold_l: &Rat,
    depth: u32,
    prefix: &[LatticeValuation],
) -> Result<Vec<ValuationWitness>, GermError> {
    if depth > 6 {
        return Err(GermError::RecursionCap);
    }
    let mut out = Vec::new();
    for (v, l) in g.enumerate_deep(threshold_l)? {
        let mut path = prefix.to_vec();
        path.push(v);
        out.push(ValuationWitness {
            path,
            log_discrepancy: l,
        });
    }
    for (sub, copies, at) in g.recursion_sites() {
        let mut prefix2 = prefix.to_vec();
        prefix2.push(at);
        let found = count_deep_eval(&sub, threshold_l, depth + 1, &prefix2)?;
        for _ in 0..copies {
            out.extend(found.iter().cloned());
        }
    }
    Ok(out)
}

/// Number of exceptional valuations over the germ with discrepancy
/// `<= -threshold` at the parameter value, with witnesses.
pub fn count_deep_divisors(
    g: &Germ,
    p: &Rat,
    threshold: &Rat,
) -> Result<Vec<ValuationWitness>, GermError> {
    let eg = g.eval(p);
    let threshold_l = &crate::rat::one() - threshold;
    count_deep_eval(&eg, &threshold_l, 0, &[])
}

/// Minimal discrepancy over monomial valuations plus the one-step recursion,
/// iterated while the minimum decreases.
pub fn min_discrepancy_germ(g: &Germ, p: &Rat) -> Result<(Rat, ValuationWitness), GermError> {
    let eg = g.eval(p);
    let mut depth = 0u32;
    let mut current = eg;
    let mut prefix: Vec<LatticeValuation> = Vec::new();
    let (mut best_l, v0) = current.monomial_min()?;
    let mut best_witness = ValuationWitness {
        path: vec![v0],
        log_discrepancy: best_l.clone(),
    };
    loop {
        depth += 1;
        if depth > 6 {
            return Err(GermError::RecursionCap);
        }
        let mut improved: Option<(EvalGerm, LatticeValuation, Rat, LatticeValuation)> = None;
        for (sub, _copies, at) in current.recursion_sites() {
            let (l, w) = sub.monomial_min()?;
            if l < best_l {
                match &improved {
                    Some((_, _, cur, _)) if *cur <= l => {}
                    _ => improved = Some((sub.clone(), at.clone(), l, w)),
                }
            }
        }
        match improved {
            None => break,
            Some((sub, at, l, w)) => {
                prefix.push(at);
                let mut path = prefix.clone();
                path.push(w);
                best_l = l.clone();
                best_witness = ValuationWitness {
                    path,
                    log_discrepancy: l,
                };
                current = sub;
            }
        }
    }
    Ok((&best_l - &crate::rat::one(), best_witness))
}

/// The three admissible shapes of a klt germ whose largest boundary
/// coefficient is at least 6/7.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GermClass {
    /// Smooth point, large branch together with a tangency: valid iff
    /// `b < 13/14`.
    TangentPair,
    /// Smooth point, two transverse branches: valid iff `b + b1 < 13/7`.
    TransversePair,
    /// Cyclic quotient with the large branch on `{x=0}`: valid iff
    /// `(n/7 - 1 + b1)/(1 - b) < q <= n - 1`.
    QuotientPair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Valid(GermClass),
    Invalid(GermClass, String),
}

/// Classify a germ with exactly one branch of coefficient `>= 6/7` and check
/// the side condition of its class (the condition is equivalent to the
/// absence of deep divisors for the 6/7 threshold).
pub fn classify_germ(g: &Germ, p: &Rat) -> Result<Classification, GermError> {
    let six_sevenths = rat(6, 7);
    let coeffs: Vec<Rat> = g.branches.iter().map(|b| b.coeff.eval(p)).collect();
    let large: Vec<usize> = (0..coeffs.len())
        .filter(|&i| coeffs[i] >= six_sevenths)
        .collect();
    if large.len() > 1 {
        return Err(GermError::SeveralLargeBranches);
    }
    let Some(&ci) = large.first() else {
        return Err(GermError::NoLargeBranch);
    };
    let b = coeffs[ci].clone();
    let others: Vec<usize> = (0..coeffs.len()).filter(|&i| i != ci).collect();

    if g.quot.is_smooth() {
        let tangent = g.branches.iter().any(|br| !br.shape.is_axis());
        if tangent {
            // b{x + y^2 = 0} + (1/2){x = 0} up to swapping which branch is
            // which; the threshold is the same either way.
            let bound = rat(13, 14);
            return Ok(if b < bound {
                Classification::Valid(GermClass::TangentPair)
            } else {
                Classification::Invalid(
                    GermClass::TangentPair,
                    format!("b = {} >= 13/14", crate::rat::fmt_rat(&b)),
                )
            });
        }
        let b1 = others
            .iter()
            .map(|&i| coeffs[i].clone())
            .fold(Rat::zero(), |a, c| a + c);
        let bound = rat(13, 7);
        let sum = &b + &b1;
        return Ok(if sum < bound {
            Classification::Valid(GermClass::TransversePair)
        } else {
            Classification::Invalid(
                GermClass::TransversePair,
                format!("b + b1 = {} >= 13/7", crate::rat::fmt_rat(&sum)),
            )
        });
    }

    // Quotient point: the classification only admits the two axes.
    if g.branches.iter().any(|br| !br.shape.is_axis()) {
        return Err(GermError::UnclassifiableShape);
    }
    // Normalize so the large branch is {x = 0}.
    let q = match g.branches[ci].shape {
        BranchShape::Axis1 => g.quot.q,
        _ => g.quot.swapped().q,
    };
    let n = g.quot.n;
    let b1 = others
        .iter()
        .map(|&i| coeffs[i].clone())
        .fold(Rat::zero(), |a, c| a + c);
    // (n/7 - 1 + b1)/(1 - b) < q.
    let lhs = &(&(&rat(n as i64, 7) - &crate::rat::one()) + &b1) / &(&crate::rat::one() - &b);
    let q_rat = int(q as i64);
    Ok(if lhs < q_rat {
        Classification::Valid(GermClass::QuotientPair)
    } else {
        Classification::Invalid(
            GermClass::QuotientPair,
            format!(
                "(n/7 - 1 + b1)/(1 - b) = {} >= q = {}",
                crate::rat::fmt_rat(&lhs),
                q
            ),
        )
    })
}

/// Log-canonicity of the germ at a parameter value (all ray values of `l`
/// nonnegative). Used for complement feasibility.
pub fn germ_is_lc(g: &Germ, p: &Rat) -> bool {
    g.eval(p).is_lc()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::{af, AffineForm};

    fn cq(n: u64, q: u64) -> CyclicQuot {
        CyclicQuot::new(n, q).unwrap()
    }

    fn branch(c: AffineForm, shape: BranchShape) -> Branch {
        Branch { coeff: c, shape }
    }

    #[test]
    fn classify_examples() {
        // Smooth point, 6/7 on an axis plus 1/2 tangent of order 2: class 1.
        let g = Germ::new(
            CyclicQuot::smooth(),
            vec![
                branch(af(6, 7, 0, 1), BranchShape::Axis1),
                branch(af(1, 2, 0, 1), BranchShape::Tangent { axis: 1, order: 2 }),
            ],
        );
        assert_eq!(
            classify_germ(&g, &rat(0, 1)).unwrap(),
            Classification::Valid(GermClass::TangentPair)
        );

        // 1/2(1,1) with b = 6/7 on {x=0}: class 3, valid.
        let g = Germ::new(
            cq(2, 1),
            vec![branch(af(6, 7, 0, 1), BranchShape::Axis1)],
        );
        assert_eq!(
            classify_germ(&g, &rat(0, 1)).unwrap(),
            Classification::Valid(GermClass::QuotientPair)
        );

        // 1/7(1,1)-style violation: n = 7, q = 1, b = 6/7, b1 = 1/2 gives
        // (1 - 1 + 1/2)/(1/7) = 7/2 > 1.
        let g = Germ::new(
            cq(7, 1),
            vec![
                branch(af(6, 7, 0, 1), BranchShape::Axis1),
                branch(af(1, 2, 0, 1), BranchShape::Axis2),
            ],
        );
        match classify_germ(&g, &rat(0, 1)).unwrap() {
            Classification::Invalid(GermClass::QuotientPair, _) => {}
            other => panic!("expected invalid quotient pair, got {other:?}"),
        }

        // Two branches >= 6/7 violate the classification's k = 1.
        let g = Germ::new(
            CyclicQuot::smooth(),
            vec![
                branch(af(6, 7, 0, 1), BranchShape::Axis1),
                branch(af(8, 9, 0, 1), BranchShape::Axis2),
            ],
        );
        assert_eq!(
            classify_germ(&g, &rat(0, 1)),
            Err(GermError::SeveralLargeBranches)
        );
    }

    #[test]
    fn min_discrepancy_examples() {
        // 1/2(1,1) with 6/7 on {x=0}: minimum -3/7 at (1/2, 1/2).
        let g = Germ::new(
            cq(2, 1),
            vec![branch(af(6, 7, 0, 1), BranchShape::Axis1)],
        );
        let (d, w) = min_discrepancy_germ(&g, &rat(0, 1)).unwrap();
        assert_eq!(d, rat(-3, 7));
        assert_eq!(
            w.path,
            vec![LatticeValuation::new(rat(1, 2), rat(1, 2))]
        );

        // Smooth point, no branches: ordinary blow-up, minimum +1.
        let g = Germ::new(CyclicQuot::smooth(), vec![]);
        let (d, _) = min_discrepancy_germ(&g, &rat(0, 1)).unwrap();
        assert_eq!(d, int(1));

        // Class-1 germ at b = 6/7: the (2,1) weight gives l = 2/7 and the
        // recursion does not improve it; the minimum stays above -6/7.
        let g = Germ::new(
            CyclicQuot::smooth(),
            vec![
                branch(af(6, 7, 0, 1), BranchShape::Axis1),
                branch(af(1, 2, 0, 1), BranchShape::Tangent { axis: 1, order: 2 }),
            ],
        );
        let (d, w) = min_discrepancy_germ(&g, &rat(0, 1)).unwrap();
        assert_eq!(d, rat(-5, 7));
        assert_eq!(w.path, vec![LatticeValuation::new(int(2), int(1))]);
        assert!(d > rat(-6, 7));
    }

    /// Brute force over all monomial weights confirms the reported minimum
    /// for axis-only germs.
    #[test]
    fn min_discrepancy_brute_force_axis_germs() {
        for (n, q, c1n, c1d, c2n, c2d) in [
            (2u64, 1u64, 6i64, 7i64, 0i64, 1i64),
            (3, 1, 19, 21, 2, 3),
            (5, 4, 5, 6, 0, 1),
            (7, 4, 6, 7, 1, 2),
        ] {
            let g = Germ::new(
                cq(n, q),
                vec![
                    branch(af(c1n, c1d, 0, 1), BranchShape::Axis1),
                    branch(af(c2n, c2d, 0, 1), BranchShape::Axis2),
                ],
            );
            let (d, _) = min_discrepancy_germ(&g, &rat(0, 1)).unwrap();
            let c1 = rat(c1n, c1d);
            let c2 = rat(c2n, c2d);
            let mut best: Option<Rat> = None;
            for i in 1..=(6 * n as i64) {
                for j in 1..=(6 * n as i64) {
                    if (i as u64 % n) != (q * j as u64) % n {
                        continue;
                    }
                    let v = LatticeValuation::new(rat(i, n as i64), rat(j, n as i64));
                    if !cq(n, q).is_primitive(&v) {
                        continue;
                    }
                    let l = &(&v.x * &(&crate::rat::one() - &c1))
                        + &(&v.y * &(&crate::rat::one() - &c2));
                    let d2 = &l - &crate::rat::one();
                    best = Some(match best {
                        None => d2,
                        Some(b) => {
                            if d2 < b {
                                d2
                            } else {
                                b
                            }
                        }
                    });
                }
            }
            assert_eq!(d, best.unwrap(), "1/{n}({q},1)");
        }
    }

    #[test]
    fn count_deep_examples() {
        // 1/2(1,1) with 6/7: nothing deep.
        let g = Germ::new(
            cq(2, 1),
            vec![branch(af(6, 7, 0, 1), BranchShape::Axis1)],
        );
        assert!(count_deep_divisors(&g, &rat(0, 1), &rat(6, 7))
            .unwrap()
            .is_empty());

        // Smooth, 19/21 and 2/3 transverse: one deep divisor, matching the
        // single deep valuation of the endpoint germ.
        let g = Germ::new(
            cq(3, 1),
            vec![
                branch(AffineForm::param(), BranchShape::Axis1),
                branch(af(2, 3, 0, 1), BranchShape::Axis2),
            ],
        );
        let ws = count_deep_divisors(&g, &rat(19, 21), &rat(6, 7)).unwrap();
        assert_eq!(ws.len(), 1);
        assert_eq!(ws[0].log_discrepancy, rat(1, 7));

        // Smooth, no branches: nothing deep.
        let g = Germ::new(CyclicQuot::smooth(), vec![]);
        assert!(count_deep_divisors(&g, &rat(0, 1), &rat(6, 7))
            .unwrap()
            .is_empty());
    }

    /// The class-3 side condition is exactly the absence of deep divisors,
    /// over a grid of coefficients and quotient types.
    #[test]
    fn classification_matches_deep_count() {
        let coeffs = [rat(0, 1), rat(1, 2), rat(2, 3), rat(3, 4), rat(4, 5), rat(5, 6)];
        let ts = [rat(6, 7), rat(37, 42), rat(9, 10), rat(13, 14), rat(20, 21)];
        for n in 2..=9u64 {
            for q in 1..n {
                if gcd(n, q) != 1 {
                    continue;
                }
                for b1 in &coeffs {
                    for t in &ts {
                        let g = Germ::new(
                            cq(n, q),
                            vec![
                                branch(AffineForm::param(), BranchShape::Axis1),
                                branch(
                                    AffineForm::constant_form(b1.clone()),
                                    BranchShape::Axis2,
                                ),
                            ],
                        );
                        let eg = g.eval(t);
                        if eg.check_klt().is_err() {
                            continue;
                        }
                        let class = classify_germ(&g, t).unwrap();
                        let deep = count_deep_divisors(&g, t, &rat(6, 7)).unwrap();
                        match class {
                            Classification::Valid(_) => {
                                assert!(deep.is_empty(), "1/{n}({q},1) b1={b1} t={t}")
                            }
                            Classification::Invalid(..) => {
                                assert!(!deep.is_empty(), "1/{n}({q},1) b1={b1} t={t}")
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tangent_pair_threshold_is_thirteen_fourteenths() {
        // The class-1 germ acquires a deep divisor exactly at b = 13/14.
        let g = Germ::new(
            CyclicQuot::smooth(),
            vec![
                branch(AffineForm::param(), BranchShape::Tangent { axis: 1, order: 2 }),
                branch(af(1, 2, 0, 1), BranchShape::Axis1),
            ],
        );
        assert!(count_deep_divisors(&g, &rat(9, 10), &rat(6, 7))
            .unwrap()
            .is_empty());
        let ws = count_deep_divisors(&g, &rat(13, 14), &rat(6, 7)).unwrap();
        assert_eq!(ws.len(), 1);
    }
}
