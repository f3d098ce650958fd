//! The global count of divisors with discrepancy `<= -6/7`.
//!
//! A divisor contributes to `delta(S, D)` either as a boundary component
//! whose coefficient is at least the threshold (a non-exceptional divisor
//! with discrepancy `-c`), or as an exceptional valuation over one of the
//! declared point germs with discrepancy `<= -threshold`. Distinct germs
//! produce distinct valuations, so the counts add.
//!
//! Germs at smooth points carrying a single transverse branch of coefficient
//! `< 1` are skipped: every valuation over such a point has
//! `l >= (1 - c) + 1 > 1`.

use crate::affine::AffineForm;
use crate::germ::{count_deep_divisors, Branch, BranchShape, Germ, GermError};
use crate::rat::{fmt_rat, rat, Rat};
use crate::surface::{LogSurface, Site, SurfaceError};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaWitness {
    /// Boundary component name, or `point-id` plus valuation path.
    pub source: String,
    /// Coefficient for a boundary component; discrepancy for an exceptional
    /// valuation.
    #[serde(with = "crate::affine::rat_str")]
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: usize,
    pub witnesses: Vec<DeltaWitness>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DeltaError {
    #[error("not klt: coefficient of {0} is >= 1 at the sample value")]
    NotKlt(String),
    #[error("germ at {0}: {1}")]
    Germ(String, GermError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// Count the deep divisors of `(S, tC + sum b_i B_i)` at parameter `t`.
pub fn delta(s: &LogSurface, t: &Rat, threshold: &Rat) -> Result<DeltaReport, DeltaError> {
    let one = crate::rat::one();
    let mut witnesses = Vec::new();
    for e in &s.boundary {
        let c = e.coeff.eval(t);
        if c >= one {
            return Err(DeltaError::NotKlt(e.name.clone()));
        }
        if &c >= threshold {
            witnesses.push(DeltaWitness {
                source: e.name.clone(),
                value: c,
            });
        }
    }
    let threshold_l = &one - threshold;
    for p in &s.points {
        match &p.site {
            Site::Quot { quot, placements } => {
                // Skip rule: single transverse branch at a smooth point.
                if quot.is_smooth()
                    && placements.len() == 1
                    && placements[0].1.is_axis()
                {
                    continue;
                }
                let branches: Vec<Branch> = placements
                    .iter()
                    .map(|(name, shape)| {
                        Ok(Branch {
                            coeff: s.coeff_of(name)?,
                            shape: *shape,
                        })
                    })
                    .collect::<Result<_, SurfaceError>>()?;
                let g = Germ::new(*quot, branches);
                let ws = count_deep_divisors(&g, t, threshold)
                    .map_err(|e| DeltaError::Germ(p.id.clone(), e))?;
                for w in ws {
                    let path: Vec<String> = w
                        .path
                        .iter()
                        .map(|v| format!("({},{})", fmt_rat(&v.x), fmt_rat(&v.y)))
                        .collect();
                    witnesses.push(DeltaWitness {
                        source: format!("{} {}", p.id, path.join(" -> ")),
                        value: &w.log_discrepancy - &one,
                    });
                }
            }
            Site::GraphAttach { graph, attach } => {
                let mut att = Vec::new();
                for (name, v) in attach {
                    att.push((*v, s.coeff_of(name)?, 1u64));
                }
                let forms = graph
                    .crepant_coefficients(&att)
                    .map_err(|e| DeltaError::Germ(p.id.clone(), GermError::Cyclic(e.into())))?;
                let a: Vec<Rat> = forms.iter().map(|f| f.eval(t)).collect();
                if a.iter().any(|x| *x >= one) {
                    return Err(DeltaError::NotKlt(p.id.clone()));
                }
                // The chain curves themselves.
                for (i, ai) in a.iter().enumerate() {
                    if &(&one - ai) <= &threshold_l {
                        witnesses.push(DeltaWitness {
                            source: format!("{} vertex {}", p.id, i),
                            value: ai - &one,
                        });
                    }
                }
                // Valuations over crossing points of the configuration.
                let mut pair_sites: Vec<(String, Rat, Rat)> = Vec::new();
                for &(i, j) in &graph.edges {
                    pair_sites.push((
                        format!("{} edge {}-{}", p.id, i, j),
                        a[i].clone(),
                        a[j].clone(),
                    ));
                }
                for (vertex, coeff, _) in &att {
                    let label = format!("{} attach at vertex {}", p.id, vertex);
                    pair_sites.push((label, a[*vertex].clone(), coeff.eval(t)));
                }
                for (label, c1, c2) in pair_sites {
                    let g = Germ::new(
                        crate::cyclic::CyclicQuot::smooth(),
                        vec![
                            Branch {
                                coeff: AffineForm::constant_form(c1),
                                shape: BranchShape::Axis1,
                            },
                            Branch {
                                coeff: AffineForm::constant_form(c2),
                                shape: BranchShape::Axis2,
                            },
                        ],
                    );
                    let ws = count_deep_divisors(&g, &rat(0, 1), threshold)
                        .map_err(|e| DeltaError::Germ(label.clone(), e))?;
                    for w in ws {
                        witnesses.push(DeltaWitness {
                            source: format!("{} depth {:?}", label, w.path.len()),
                            value: &w.log_discrepancy - &one,
                        });
                    }
                }
            }
        }
    }
    Ok(DeltaReport {
        delta: witnesses.len(),
        witnesses,
    })
}

/// `delta` at each sample, in order.
pub fn delta_sweep(
    s: &LogSurface,
    samples: &[Rat],
    threshold: &Rat,
) -> Result<Vec<(Rat, DeltaReport)>, DeltaError> {
    samples
        .iter()
        .map(|t| delta(s, t, threshold).map(|r| (t.clone(), r)))
        .collect()
}

/// Default sweep samples: the lower endpoint, the midpoint, and the upper
/// endpoint (stepping 1/1000 inside when the interval is open).
pub fn default_samples(low: &Rat, high: &Rat, high_open: bool) -> Vec<Rat> {
    let mut out = vec![low.clone()];
    if high > low {
        let mid = &(low + high) / &crate::rat::int(2);
        out.push(mid);
        if high_open {
            let inside = high - &rat(1, 1000);
            out.push(if &inside > low { inside } else { low.clone() });
        } else {
            out.push(high.clone());
        }
    }
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{BoundaryEntry, CurveClass, LogSurface, SurfaceGeom};

    fn bare_plane(coeff: AffineForm) -> LogSurface {
        LogSurface {
            surface: SurfaceGeom::Wps { weights: [1, 1, 1] },
            boundary: vec![BoundaryEntry {
                name: "C".into(),
                class: CurveClass::WpsDeg { degree: 1 },
                coeff,
            }],
            points: vec![],
        }
    }

    #[test]
    fn empty_boundary_has_delta_zero() {
        let s = bare_plane(AffineForm::zero());
        let rep = delta(&s, &rat(6, 7), &rat(6, 7)).unwrap();
        assert_eq!(rep.delta, 0);
    }

    #[test]
    fn coefficient_one_is_rejected() {
        let s = bare_plane(AffineForm::param());
        assert!(matches!(
            delta(&s, &crate::rat::one(), &rat(6, 7)),
            Err(DeltaError::NotKlt(_))
        ));
    }

    #[test]
    fn default_sample_shapes() {
        // Closed interval: endpoints plus midpoint.
        let s = default_samples(&rat(6, 7), &rat(7, 8), false);
        assert_eq!(s, vec![rat(6, 7), rat(97, 112), rat(7, 8)]);
        // Open interval: probe 1/1000 inside.
        let s = default_samples(&rat(6, 7), &rat(19, 21), true);
        assert_eq!(s.len(), 3);
        assert!(s[2] < rat(19, 21));
        // Degenerate interval: a single sample.
        let s = default_samples(&rat(6, 7), &rat(6, 7), false);
        assert_eq!(s, vec![rat(6, 7)]);
    }
}
