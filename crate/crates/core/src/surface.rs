//! Global rank-one log surfaces and their exact intersection theory.
//!
//! Two surface descriptions are supported:
//!
//! - `Wps`: a weighted projective plane `P(a1,a2,a3)`. Curve classes are
//!   degrees in the weighted grading; `X_d . X_e = d*e/(a1*a2*a3)` and the
//!   canonical class has degree `-(a1+a2+a3)`.
//! - `GraphSurface`: a surface described by its minimal resolution — a
//!   negative-definite configuration of exceptional curves plus "handles"
//!   (curves that survive the contraction) with their resolution
//!   self-intersections and crossings. Intersections downstairs are computed
//!   by the standard pullback solve; curve classes are rational combinations
//!   of handles.
//!
//! A `LogSurface` adds the boundary (curve classes with affine-form
//! coefficients in `t`; the first entry is the distinguished curve `C`) and
//! the declared point germs feeding the local theory.

use crate::affine::{AffineForm, ZeroSolution};
use crate::cyclic::CyclicQuot;
use crate::excgraph::ExcGraph;
use crate::germ::{germ_is_lc, Branch, BranchShape, Germ};
use crate::rat::{int, rat, Rat};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wps {
    pub weights: [u64; 3],
}

impl Wps {
    pub fn new(a1: u64, a2: u64, a3: u64) -> Self {
        Wps {
            weights: [a1, a2, a3],
        }
    }

    pub fn weight_product(&self) -> Rat {
        int((self.weights[0] * self.weights[1] * self.weights[2]) as i64)
    }

    pub fn weight_sum(&self) -> Rat {
        int((self.weights[0] + self.weights[1] + self.weights[2]) as i64)
    }

    /// `X_d . X_e = d*e / (a1*a2*a3)`.
    pub fn intersect(&self, d: u64, e: u64) -> Rat {
        &int((d * e) as i64) / &self.weight_product()
    }
}

/// Intersection of two degree classes on a weighted projective plane.
pub fn wps_intersect(w: &Wps, d: u64, e: u64) -> Rat {
    w.intersect(d, e)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Handle {
    pub name: String,
    /// Self-intersection of the strict transform on the minimal resolution.
    pub selfint: i64,
    /// Arithmetic genus of the strict transform (0 or 1 here).
    pub pa: u8,
    /// Crossings with exceptional curves: (vertex, multiplicity).
    pub vertex_crossings: Vec<(usize, u64)>,
    /// Crossings with other handles on the resolution: (handle, multiplicity).
    pub handle_crossings: Vec<(usize, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSurface {
    pub exc: ExcGraph,
    pub handles: Vec<Handle>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error(transparent)]
    Exc(#[from] crate::excgraph::ExcError),
    #[error("no curve with positive self-intersection to test against")]
    NoAmpleTest,
    #[error("degree of C vanishes: no solution for b")]
    NoSolution,
    #[error("b = 1 is outside the range of the adjunction formula")]
    AdjunctionAtOne,
    #[error("arithmetic genus computes to {0}, expected 0 or 1")]
    BadGenus(String),
    #[error("declared germ data is inconsistent: {0}")]
    BadGermData(String),
    #[error("complementary index exceeds the search bound {0}")]
    ComplementBound(u64),
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
}

impl GraphSurface {
    fn strict_pairing(&self, i: usize, j: usize) -> Rat {
        if i == j {
            return int(self.handles[i].selfint);
        }
        let mut total = 0u64;
        for &(h, m) in &self.handles[i].handle_crossings {
            if h == j {
                total += m;
            }
        }
        for &(h, m) in &self.handles[j].handle_crossings {
            if h == i {
                total += m;
            }
        }
        int(total as i64)
    }

    fn crossing_vector(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.exc.len()];
        for &(k, m) in &self.handles[i].vertex_crossings {
            v[k] = &v[k] + &int(m as i64);
        }
        v
    }

    /// Intersection of two handles on the contracted surface.
    pub fn handle_pairing(&self, i: usize, j: usize) -> Result<Rat, SurfaceError> {
        let corr = self.exc.pullback_corrections(&self.crossing_vector(i))?;
        let cross_j = self.crossing_vector(j);
        let mut total = self.strict_pairing(i, j);
        for (c, x) in corr.iter().zip(&cross_j) {
            total = total + c * x;
        }
        Ok(total)
    }

    /// `K . handle` on the contracted surface.
    pub fn k_pairing(&self, i: usize) -> Result<Rat, SurfaceError> {
        let h = &self.handles[i];
        let k_strict = int(2 * h.pa as i64 - 2 - h.selfint);
        let a = self.exc.crepant_coefficients(&[])?;
        let cross = self.crossing_vector(i);
        let mut total = k_strict;
        for (f, x) in a.iter().zip(&cross) {
            debug_assert!(f.is_constant());
            total = total + &f.constant * x;
        }
        Ok(total)
    }
}

/// Intersection of two curve classes given as handle combinations.
pub fn graph_intersect(
    g: &GraphSurface,
    a: &[(usize, Rat)],
    b: &[(usize, Rat)],
) -> Result<Rat, SurfaceError> {
    let mut total = Rat::zero();
    for (i, ci) in a {
        for (j, cj) in b {
            total = total + &(ci * cj) * &g.handle_pairing(*i, *j)?;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SurfaceGeom {
    Wps { weights: [u64; 3] },
    Graph { graph: GraphSurface },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CurveClass {
    /// Degree class on a weighted projective plane.
    WpsDeg { degree: u64 },
    /// Rational combination of handles on a graph surface.
    Combo { parts: Vec<(usize, AffineForm)> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryEntry {
    pub name: String,
    pub class: CurveClass,
    pub coeff: AffineForm,
}

/// A declared point of the surface with its local structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Site {
    /// Cyclic quotient (or smooth) point with branch placements. The type is
    /// normalized so that an `Axis1` placement lies on the weight-`q`
    /// coordinate `{x = 0}`.
    Quot {
        quot: CyclicQuot,
        placements: Vec<(String, BranchShape)>,
    },
    /// Quotient point whose boundary branches are described by attachments
    /// to the minimal-resolution graph (used when a curve meets the middle
    /// of a chain or a fork).
    GraphAttach {
        graph: ExcGraph,
        attach: Vec<(String, usize)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDecl {
    pub id: String,
    pub site: Site,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogSurface {
    pub surface: SurfaceGeom,
    /// Boundary entries; the first is the distinguished curve `C`.
    pub boundary: Vec<BoundaryEntry>,
    pub points: Vec<PointDecl>,
}

impl LogSurface {
    pub fn entry(&self, name: &str) -> Result<&BoundaryEntry, SurfaceError> {
        self.boundary
            .iter()
            .find(|e| e.name == name)
            .ok_or_else(|| SurfaceError::UnknownCurve(name.to_string()))
    }

    pub fn coeff_of(&self, name: &str) -> Result<AffineForm, SurfaceError> {
        Ok(self.entry(name)?.coeff.clone())
    }

    fn combo_at(parts: &[(usize, AffineForm)]) -> Vec<(usize, Rat)> {
        parts
            .iter()
            .map(|(i, f)| {
                debug_assert!(f.is_constant());
                (*i, f.constant.clone())
            })
            .collect()
    }

    /// Intersection number of two boundary classes.
    pub fn pairing(&self, a: &CurveClass, b: &CurveClass) -> Result<Rat, SurfaceError> {
        match (&self.surface, a, b) {
            (SurfaceGeom::Wps { weights }, CurveClass::WpsDeg { degree: d }, CurveClass::WpsDeg { degree: e }) => {
                Ok(Wps { weights: *weights }.intersect(*d, *e))
            }
            (SurfaceGeom::Graph { graph }, CurveClass::Combo { parts: pa }, CurveClass::Combo { parts: pb }) => {
                graph_intersect(graph, &Self::combo_at(pa), &Self::combo_at(pb))
            }
            _ => Err(SurfaceError::BadGermData(
                "curve class does not match the surface kind".into(),
            )),
        }
    }

    /// `K . class`.
    pub fn k_pairing(&self, a: &CurveClass) -> Result<Rat, SurfaceError> {
        match (&self.surface, a) {
            (SurfaceGeom::Wps { weights }, CurveClass::WpsDeg { degree: d }) => {
                let w = Wps { weights: *weights };
                Ok(&(-&w.weight_sum() * int(*d as i64)) / &w.weight_product())
            }
            (SurfaceGeom::Graph { graph }, CurveClass::Combo { parts }) => {
                let mut total = Rat::zero();
                for (i, c) in Self::combo_at(parts) {
                    total = total + &c * &graph.k_pairing(i)?;
                }
                Ok(total)
            }
            _ => Err(SurfaceError::BadGermData(
                "curve class does not match the surface kind".into(),
            )),
        }
    }

    /// Degree functional used for nef tests: the weighted-degree grading on
    /// a weighted projective plane; pairing with `C` on a graph surface.
    pub fn degree(&self, a: &CurveClass) -> Result<Rat, SurfaceError> {
        match (&self.surface, a) {
            (SurfaceGeom::Wps { .. }, CurveClass::WpsDeg { degree: d }) => Ok(int(*d as i64)),
            (SurfaceGeom::Graph { .. }, _) => self.pairing(a, &self.boundary[0].class),
            _ => Err(SurfaceError::BadGermData(
                "curve class does not match the surface kind".into(),
            )),
        }
    }

    fn k_degree(&self) -> Result<Rat, SurfaceError> {
        match &self.surface {
            SurfaceGeom::Wps { weights } => Ok(-Wps { weights: *weights }.weight_sum()),
            SurfaceGeom::Graph { .. } => self.k_pairing(&self.boundary[0].class),
        }
    }

    /// Degree of `-(K + D(t))` as a form in `t`; nonnegative iff `-(K+D)`
    /// is nef on these rank-one surfaces.
    pub fn nef_degree_form(&self) -> Result<AffineForm, SurfaceError> {
        let mut f = AffineForm::constant_form(-self.k_degree()?);
        for e in &self.boundary {
            let d = self.degree(&e.class)?;
            f = &f - &e.coeff.scale(&d);
        }
        Ok(f)
    }

    /// The unique `b` with `(K + b C + sum b_i B_i) . A = 0` for an ample
    /// test class `A`; on these surfaces the same value is the nef threshold
    /// of `t`.
    pub fn solve_b(&self) -> Result<Rat, SurfaceError> {
        // Test class: C when C^2 > 0, otherwise the first boundary curve
        // with positive self-intersection.
        let mut test = None;
        for e in &self.boundary {
            if self.pairing(&e.class, &e.class)? > Rat::zero() {
                test = Some(&e.class);
                break;
            }
        }
        let test = test.ok_or(SurfaceError::NoAmpleTest)?;
        let mut f = AffineForm::constant_form(self.k_pairing(test)?);
        for e in &self.boundary {
            f = &f + &e.coeff.scale(&self.pairing(&e.class, test)?);
        }
        match f.solve_zero() {
            ZeroSolution::Root(b) => Ok(b),
            _ => Err(SurfaceError::NoSolution),
        }
    }

    /// Nef threshold in `t`; identical to `solve_b`.
    pub fn t_max(&self) -> Result<Rat, SurfaceError> {
        self.solve_b()
    }

    /// The singular points of the surface lying on `C`, as `(n, q)`
    /// normalized so `C` is the `{x=0}` branch, together with the point id.
    pub fn c_singularities(&self) -> Result<Vec<(String, CyclicQuot)>, SurfaceError> {
        let c_name = &self.boundary[0].name;
        let mut out = Vec::new();
        for p in &self.points {
            match &p.site {
                Site::Quot { quot, placements } => {
                    if quot.is_smooth() {
                        continue;
                    }
                    for (name, shape) in placements {
                        if name == c_name {
                            let q = match shape {
                                BranchShape::Axis1 => *quot,
                                BranchShape::Axis2 => quot.swapped(),
                                _ => {
                                    return Err(SurfaceError::BadGermData(format!(
                                        "C is not an axis at {}",
                                        p.id
                                    )))
                                }
                            };
                            out.push((p.id.clone(), q));
                        }
                    }
                }
                Site::GraphAttach { graph, attach } => {
                    if attach.iter().any(|(n, _)| n == c_name) {
                        // C at a chain end: read the continued fraction from
                        // C's end of the chain.
                        let (_, v) = attach.iter().find(|(n, _)| n == c_name).unwrap();
                        let chain = &graph.selfints;
                        if *v == 0 {
                            let q = crate::cyclic::hj_reconstruct(
                                &crate::cyclic::ResolutionChain(chain.clone()),
                            )?;
                            out.push((p.id.clone(), q));
                        } else if *v == chain.len() - 1 {
                            let rev: Vec<i64> = chain.iter().rev().cloned().collect();
                            let q = crate::cyclic::hj_reconstruct(
                                &crate::cyclic::ResolutionChain(rev),
                            )?;
                            out.push((p.id.clone(), q));
                        } else {
                            return Err(SurfaceError::BadGermData(format!(
                                "C meets the middle of a chain at {}",
                                p.id
                            )));
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl From<crate::cyclic::CyclicError> for SurfaceError {
    fn from(e: crate::cyclic::CyclicError) -> Self {
        SurfaceError::BadGermData(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjunctionData {
    pub deg_diff: Rat,
    pub c2: Rat,
    pub c2_tilde: Rat,
    pub pa: u8,
}

/// Adjunction along `C` at the crepant value `b`: the different degree
/// `sum(1 - 1/n_i)`, the self-intersections `C^2` and `C~^2`, and the
/// arithmetic genus recovered from `(K + C) . C = 2 p_a - 2 + deg_diff`.
///
/// Also checks `C^2 (1 - b) = (2 p_a - 2) + deg_diff + sum b_i (B_i . C)`.
pub fn adjunction(s: &LogSurface, b: &Rat) -> Result<AdjunctionData, SurfaceError> {
    if *b == crate::rat::one() {
        return Err(SurfaceError::AdjunctionAtOne);
    }
    let c = &s.boundary[0].class;
    let sings = s.c_singularities()?;
    let mut deg_diff = Rat::zero();
    let mut q_sum = Rat::zero();
    for (_, quot) in &sings {
        deg_diff = deg_diff + &crate::rat::one() - &rat(1, quot.n as i64);
        q_sum = q_sum + rat(quot.q as i64, quot.n as i64);
    }
    let c2 = s.pairing(c, c)?;
    let kc = s.k_pairing(c)?;
    // (K + C) . C = 2 p_a - 2 + deg_diff.
    let two_pa = &(&kc + &c2) - &deg_diff + int(2);
    if !crate::rat::is_integer(&two_pa) || two_pa.is_negative() || two_pa > int(2) {
        return Err(SurfaceError::BadGenus(crate::rat::fmt_rat(&two_pa)));
    }
    let pa = if two_pa.is_zero() { 0u8 } else { 1u8 };
    if two_pa == int(1) {
        return Err(SurfaceError::BadGenus("1/2".into()));
    }
    // Cross-check the crepant-value formula for C^2.
    let mut rhs = &(int(2 * pa as i64) - int(2)) + &deg_diff;
    for e in s.boundary.iter().skip(1) {
        rhs = rhs + &e.coeff.eval(b) * &s.pairing(&e.class, c)?;
    }
    let lhs = &c2 * &(&crate::rat::one() - b);
    if lhs != rhs {
        return Err(SurfaceError::BadGermData(format!(
            "adjunction mismatch: C^2 (1-b) = {} but boundary side = {}",
            crate::rat::fmt_rat(&lhs),
            crate::rat::fmt_rat(&rhs)
        )));
    }
    Ok(AdjunctionData {
        deg_diff,
        c2_tilde: &c2 - &q_sum,
        c2,
        pa,
    })
}

/// Minimal `n >= 1` such that the boundary has an `n`-complement: raise each
/// coefficient `c` to the least multiple of `1/n` that is `>= max(c,
/// floor((n+1)c)/n)`, require every raised coefficient `<= 1`, local log
/// canonicity at every declared germ, and an effective residual class `R`
/// with `n R` integral and `deg(K + D+ + R) = 0`.
pub fn complement_index(s: &LogSurface, t: &Rat, bound: u64) -> Result<u64, SurfaceError> {
    let coeffs: Vec<Rat> = s.boundary.iter().map(|e| e.coeff.eval(t)).collect();
    let degrees: Vec<Rat> = s
        .boundary
        .iter()
        .map(|e| s.degree(&e.class))
        .collect::<Result<_, _>>()?;
    let neg_k_deg = -self_k_degree(s)?;
    'outer: for n in 1..=bound {
        let nn = int(n as i64);
        let mut raised = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            // floor((n+1) c)/n, then the least multiple of 1/n >= max(c, .).
            let fl = &int(n as i64 + 1) * c;
            let fl = Rat::from_integer(crate::rat::floor_int(&fl)) / &nn;
            let target = if *c > fl { c.clone() } else { fl };
            let e = crate::rat::ceil_int(&(&target * &nn));
            let raised_c = Rat::from_integer(e) / &nn;
            if raised_c > crate::rat::one() {
                continue 'outer;
            }
            raised.push(raised_c);
        }
        // Residual degree must be nonnegative and representable.
        let mut used = Rat::zero();
        for (c, d) in raised.iter().zip(&degrees) {
            used = used + c * d;
        }
        let residual = &neg_k_deg - &used;
        if residual.is_negative() {
            continue;
        }
        if !residual_representable(s, &(&residual * &nn))? {
            continue;
        }
        // Local log canonicity at the declared germs with raised
        // coefficients.
        let raised_coeff = |name: &str| -> Result<AffineForm, SurfaceError> {
            let idx = s
                .boundary
                .iter()
                .position(|e| e.name == name)
                .ok_or_else(|| SurfaceError::UnknownCurve(name.to_string()))?;
            Ok(AffineForm::constant_form(raised[idx].clone()))
        };
        let mut lc = true;
        for p in &s.points {
            match &p.site {
                Site::Quot { quot, placements } => {
                    let mut branches = Vec::new();
                    for (name, shape) in placements {
                        branches.push(Branch {
                            coeff: raised_coeff(name)?,
                            shape: *shape,
                        });
                    }
                    let g = Germ::new(*quot, branches);
                    if !germ_is_lc(&g, &Rat::zero()) {
                        lc = false;
                        break;
                    }
                }
                Site::GraphAttach { graph, attach } => {
                    let mut att = Vec::new();
                    for (name, v) in attach {
                        att.push((*v, raised_coeff(name)?, 1u64));
                    }
                    let a = graph.crepant_coefficients(&att)?;
                    if a.iter().any(|f| f.constant > crate::rat::one()) {
                        lc = false;
                        break;
                    }
                }
            }
        }
        if lc {
            return Ok(n);
        }
    }
    Err(SurfaceError::ComplementBound(bound))
}

fn self_k_degree(s: &LogSurface) -> Result<Rat, SurfaceError> {
    match &s.surface {
        SurfaceGeom::Wps { weights } => Ok(-Wps { weights: *weights }.weight_sum()),
        SurfaceGeom::Graph { .. } => s.k_pairing(&s.boundary[0].class),
    }
}

/// Whether a nonnegative degree is the degree of an effective integral
/// divisor: membership in the numerical semigroup of the three weights on a
/// weighted projective plane, or of the handle degrees on a graph surface.
fn residual_representable(s: &LogSurface, value: &Rat) -> Result<bool, SurfaceError> {
    if value.is_zero() {
        return Ok(true);
    }
    if value.is_negative() {
        return Ok(false);
    }
    let gens: Vec<Rat> = match &s.surface {
        SurfaceGeom::Wps { weights } => weights.iter().map(|&a| int(a as i64)).collect(),
        SurfaceGeom::Graph { graph } => {
            let mut out = Vec::new();
            for i in 0..graph.handles.len() {
                out.push(self_degree_of_handle(s, i)?);
            }
            out
        }
    };
    // Clear denominators and run a bounded coin-problem check.
    let mut denom = num_bigint::BigInt::from(1);
    for g in &gens {
        denom = num_integer::Integer::lcm(&denom, g.denom());
    }
    denom = num_integer::Integer::lcm(&denom, value.denom());
    let scale = Rat::from_integer(denom);
    let target = crate::rat::to_i64(&(value * &scale).to_integer());
    let gi: Vec<i64> = gens
        .iter()
        .filter(|g| g.is_positive())
        .map(|g| crate::rat::to_i64(&(g * &scale).to_integer()))
        .collect();
    if gi.is_empty() || target < 0 {
        return Ok(false);
    }
    let t = target as usize;
    let mut reachable = vec![false; t + 1];
    reachable[0] = true;
    for v in 1..=t {
        for &g in &gi {
            let g = g as usize;
            if g <= v && g > 0 && reachable[v - g] {
                reachable[v] = true;
                break;
            }
        }
    }
    Ok(reachable[t])
}

fn self_degree_of_handle(s: &LogSurface, i: usize) -> Result<Rat, SurfaceError> {
    s.degree(&CurveClass::Combo {
        parts: vec![(i, AffineForm::constant_form(crate::rat::one()))],
    })
}
