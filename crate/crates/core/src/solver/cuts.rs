//! Supporting hyperplanes for the cone rows.
//!
//! Every cut is a tangent `n·w ≤ rhs` with `‖n‖ = 1`, so it holds for every
//! point of its cone by Cauchy-Schwarz. A circle `‖(ex, ey)‖ ≤ r` yields
//! `n·(ex, ey) ≤ r`; a rotated cone `fp² + fq² ≤ a·v` is separated in its
//! norm form `‖(2fp, 2fq, a − v)‖ ≤ a + v`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::formulation::{Affine, ConeKind, ConeRow, MipModel};

/// Coefficients below this are folded into the right-hand side so the
/// simplex never sees them.
const TINY: f64 = 1e-11;

/// `Σ terms ≤ rhs`, generated from cone `cone`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub cone: usize,
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

impl Cut {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(c, a)| a * x[c]).sum()
    }

    pub fn violation(&self, x: &[f64]) -> f64 {
        self.activity(x) - self.rhs
    }
}

/// All cuts generated so far. Cuts are globally valid, so one pool serves
/// every node of a search and every re-solve of the same model.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CutPool {
    cuts: Vec<Cut>,
}

impl CutPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn extend(&mut self, cuts: impl IntoIterator<Item = Cut>) {
        self.cuts.extend(cuts);
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cut> {
        self.cuts.iter()
    }

    pub fn as_slice(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn for_cone(&self, cone: usize) -> impl Iterator<Item = &Cut> {
        self.cuts.iter().filter(move |c| c.cone == cone)
    }
}

struct CutBuilder<'a> {
    model: &'a MipModel,
    terms: Vec<(usize, f64)>,
    rhs: f64,
}

impl<'a> CutBuilder<'a> {
    fn new(model: &'a MipModel, rhs: f64) -> Self {
        CutBuilder { model, terms: Vec::new(), rhs }
    }

    fn add(&mut self, col: usize, coef: f64) {
        match self.terms.iter_mut().find(|(c, _)| *c == col) {
            Some(t) => t.1 += coef,
            None => self.terms.push((col, coef)),
        }
    }

    fn add_affine(&mut self, form: &Affine, scale: f64) {
        for &(c, a) in &form.terms {
            self.add(c, scale * a);
        }
        self.rhs -= scale * form.constant;
    }

    /// Drops negligible coefficients. `Σ rest ≤ rhs − a·x` holds for the
    /// kept terms, so the rhs becomes `rhs − min(a·x)` over the bounds.
    fn finish(self, cone: usize) -> Cut {
        let mut rhs = self.rhs;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (c, a) in self.terms {
            if a.abs() >= TINY {
                terms.push((c, a));
                continue;
            }
            let col = &self.model.columns[c];
            let least = (a * col.lb).min(a * col.ub);
            if least.is_finite() {
                rhs -= least;
            } else {
                terms.push((c, a));
            }
        }
        Cut { cone, terms, rhs }
    }
}

fn circle_cut(model: &MipModel, cone: usize, ex: &Affine, ey: &Affine, radius: f64, n: (f64, f64)) -> Cut {
    let mut b = CutBuilder::new(model, radius);
    b.add_affine(ex, n.0);
    b.add_affine(ey, n.1);
    b.finish(cone)
}

/// `2n0·fp + 2n1·fq + n2·(a − v) ≤ a + v`.
fn rotated_cut(model: &MipModel, cone: usize, cols: (usize, usize, usize, usize), n: [f64; 3]) -> Cut {
    let (fp, fq, a, v) = cols;
    let mut b = CutBuilder::new(model, 0.0);
    b.add(fp, 2.0 * n[0]);
    b.add(fq, 2.0 * n[1]);
    b.add(a, n[2] - 1.0);
    b.add(v, -n[2] - 1.0);
    b.finish(cone)
}

/// Regular-polygon outer approximation of every circle row; rotated rows
/// get none up front.
pub fn initial_cuts(model: &MipModel, per_circle: usize) -> Vec<Cut> {
    let mut out = Vec::new();
    for (i, cone) in model.cones.iter().enumerate() {
        if let ConeKind::Circle { x, y, radius } = &cone.kind {
            for j in 0..per_circle {
                let theta = TAU * j as f64 / per_circle as f64;
                out.push(circle_cut(model, i, x, y, *radius, (theta.cos(), theta.sin())));
            }
        }
    }
    out
}

/// Tangent cut separating `x` from cone `index` when its norm-form residual
/// exceeds `tol`.
pub fn tangent_cut(model: &MipModel, index: usize, x: &[f64], tol: f64) -> Result<Option<Cut>> {
    let cone: &ConeRow = &model.cones[index];
    if cone.residual(x) <= tol {
        return Ok(None);
    }
    match &cone.kind {
        ConeKind::Circle { x: ex, y: ey, radius } => {
            let w = (ex.eval(x), ey.eval(x));
            let norm = w.0.hypot(w.1);
            // residual > 0 and radius >= 0 imply norm > 0
            Ok(Some(circle_cut(model, index, ex, ey, *radius, (w.0 / norm, w.1 / norm))))
        }
        &ConeKind::Rotated { fp, fq, a, v } => {
            let w = [2.0 * x[fp], 2.0 * x[fq], x[a] - x[v]];
            let norm = w[0].hypot(w[1]).hypot(w[2]);
            if norm == 0.0 {
                return Err(Error::DegenerateCone { cone: cone.name() });
            }
            Ok(Some(rotated_cut(model, index, (fp, fq, a, v), [w[0] / norm, w[1] / norm, w[2] / norm])))
        }
    }
}

/// One cut per cone row violated by more than `tol` at `x`; empty iff every
/// cone row holds within `tol`.
pub fn separate_cones(model: &MipModel, x: &[f64], tol: f64) -> Result<Vec<Cut>> {
    let mut out = Vec::new();
    for i in 0..model.cones.len() {
        if let Some(cut) = tangent_cut(model, i, x, tol)? {
            out.push(cut);
        }
    }
    Ok(out)
}

pub fn max_cone_violation(model: &MipModel, x: &[f64]) -> f64 {
    model.cones.iter().map(|c| c.residual(x)).fold(0.0, f64::max)
}
