//! Configurations of exceptional curves and the crepant-pullback solve.
//!
//! An `ExcGraph` is a set of rational curves on a smooth surface, given by
//! self-intersections and transverse crossings. For a contraction of such a
//! configuration the two standard linear systems are solved here exactly:
//!
//! - crepant coefficients `a_i` (negated discrepancies) from
//!   `(K + sum a_i E_i + sum m_c C_c) . E_j = 0`, where the `m_c` are the
//!   multiplicities of non-contracted curves meeting the configuration;
//! - pullback corrections `c_i` of a curve `h` from
//!   `(h + sum c_i E_i) . E_j = 0`.
//!
//! Both use `K . E_j = -2 - E_j^2` (all exceptional curves here are rational).

use crate::affine::AffineForm;
use crate::linalg;
use crate::rat::{int, Rat};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcGraph {
    /// Self-intersection of each exceptional curve.
    pub selfints: Vec<i64>,
    /// Unordered transverse crossings between exceptional curves.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExcError {
    #[error("exceptional configuration is not negative definite")]
    NotNegativeDefinite,
    #[error("singular intersection system")]
    Singular,
}

impl ExcGraph {
    pub fn chain(selfints: &[i64]) -> Self {
        let edges = (1..selfints.len()).map(|i| (i - 1, i)).collect();
        ExcGraph {
            selfints: selfints.to_vec(),
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.selfints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selfints.is_empty()
    }

    pub fn matrix(&self) -> Vec<Vec<Rat>> {
        let n = self.len();
        let mut m = vec![vec![crate::rat::zero(); n]; n];
        for (i, &c) in self.selfints.iter().enumerate() {
            m[i][i] = int(c);
        }
        for &(i, j) in &self.edges {
            m[i][j] = int(1);
            m[j][i] = int(1);
        }
        m
    }

    pub fn is_negative_definite(&self) -> bool {
        linalg::is_negative_definite(&self.matrix())
    }

    /// Crepant coefficients with affine-form multiplicities attached at
    /// vertices. `attachments[k] = (vertex, multiplicity, crossings)` means a
    /// non-contracted curve with that multiplicity meets the vertex
    /// `crossings` times (almost always once).
    pub fn crepant_coefficients(
        &self,
        attachments: &[(usize, AffineForm, u64)],
    ) -> Result<Vec<AffineForm>, ExcError> {
        if !self.is_negative_definite() {
            return Err(ExcError::NotNegativeDefinite);
        }
        let n = self.len();
        let mut rhs_c = Vec::with_capacity(n);
        let mut rhs_s = Vec::with_capacity(n);
        for j in 0..n {
            let mut f = AffineForm::constant_form(int(2 + self.selfints[j]));
            for (v, m, crossings) in attachments {
                if *v == j {
                    f = &f - &m.scale(&int(*crossings as i64));
                }
            }
            rhs_c.push(f.constant);
            rhs_s.push(f.slope);
        }
        let m = self.matrix();
        let xc = linalg::solve(&m, &rhs_c).ok_or(ExcError::Singular)?;
        let xs = linalg::solve(&m, &rhs_s).ok_or(ExcError::Singular)?;
        Ok(xc
            .into_iter()
            .zip(xs)
            .map(|(c, s)| AffineForm::new(c, s))
            .collect())
    }

    /// Pullback corrections of a curve crossing the given vertices with the
    /// given multiplicities.
    pub fn pullback_corrections(&self, crossings: &[Rat]) -> Result<Vec<Rat>, ExcError> {
        assert_eq!(crossings.len(), self.len());
        if !self.is_negative_definite() {
            return Err(ExcError::NotNegativeDefinite);
        }
        let rhs: Vec<Rat> = crossings.iter().map(|x| -x).collect();
        linalg::solve(&self.matrix(), &rhs).ok_or(ExcError::Singular)
    }
}
