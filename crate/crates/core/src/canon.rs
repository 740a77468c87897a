//! Canonical homomorphism forms between matrix spaces.
//!
//! * additive: `X -> P X^τ Q` and `X -> P (ᵗX)^τ Q`
//! * Šemrl: `X -> P [(I + X^τ L)^-1 X^τ ⊕ 0] Q` and its transpose
//!   `X -> P [ᵗX^τ (I + L ᵗX^τ)^-1 ⊕ 0] Q`
//! * shifted Šemrl: the same with `X^τ - A0^τ` in place of `X^τ`, plus a
//!   constant offset.
//!
//! Plus an exhaustive search for admissible `L` and a proper colouring
//! builder.

use rayon::prelude::*;
use thiserror::Error;

use crate::classify::{is_graph_hom, MapTable};
use crate::fields::{enumerate_field_homs, Elem, Field, FieldHom};
use crate::geometry::MaximalSet;
use crate::matrices::{Mat, MatError, MatrixSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CanonError {
    #[error("I + X^τ L is singular for X = {0}")]
    InvalidL(String),
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("{0} must have rank at least 2")]
    RankTooSmall(&'static str),
    #[error("{0} must be invertible")]
    NotInvertible(&'static str),
    #[error("field homomorphism does not match the source and destination fields")]
    HomMismatch,
    #[error("target clique has {have} points, the colouring needs {need}")]
    TargetTooSmall { have: usize, need: usize },
    #[error("colouring is not proper: {0}")]
    ImproperColouring(String),
    #[error("no field of order {0} in the standard table")]
    NoExtension(u64),
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    AdditiveStandard,
    AdditiveTranspose,
    SemrlStandard,
    SemrlTranspose,
    ShiftedSemrlStandard,
    ShiftedSemrlTranspose,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::AdditiveStandard => "standard",
            Variant::AdditiveTranspose => "transpose",
            Variant::SemrlStandard => "semrl",
            Variant::SemrlTranspose => "semrl-t",
            Variant::ShiftedSemrlStandard => "shifted",
            Variant::ShiftedSemrlTranspose => "shifted-t",
        }
    }

    pub fn parse(s: &str) -> Option<Variant> {
        [
            Variant::AdditiveStandard,
            Variant::AdditiveTranspose,
            Variant::SemrlStandard,
            Variant::SemrlTranspose,
            Variant::ShiftedSemrlStandard,
            Variant::ShiftedSemrlTranspose,
        ]
        .into_iter()
        .find(|v| v.name() == s)
    }

    pub fn is_transpose(self) -> bool {
        matches!(
            self,
            Variant::AdditiveTranspose | Variant::SemrlTranspose | Variant::ShiftedSemrlTranspose
        )
    }

    pub fn is_additive(self) -> bool {
        matches!(self, Variant::AdditiveStandard | Variant::AdditiveTranspose)
    }

    pub fn is_shifted(self) -> bool {
        matches!(self, Variant::ShiftedSemrlStandard | Variant::ShiftedSemrlTranspose)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    variant: Variant,
    src: MatrixSpace,
    dst: MatrixSpace,
    p: Mat,
    q: Mat,
    tau: FieldHom,
    l: Option<Mat>,
    a0: Option<Mat>,
    offset: Option<Mat>,
}

fn expect_shape(what: &str, a: &Mat, rows: usize, cols: usize) -> Result<(), CanonError> {
    if a.shape() != (rows, cols) {
        return Err(CanonError::Shape(format!(
            "{what} is {}x{}, expected {rows}x{cols}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

fn check_hom(src: &MatrixSpace, dst: &MatrixSpace, tau: &FieldHom) -> Result<(), CanonError> {
    if tau.src() != src.field() || tau.dst() != dst.field() {
        return Err(CanonError::HomMismatch);
    }
    Ok(())
}

impl CanonicalForm {
    /// `X -> P X^τ Q` with `P` of shape `m' x m` and `Q` of shape `n x n'`.
    pub fn additive(src: &MatrixSpace, dst: &MatrixSpace, p: Mat, tau: FieldHom, q: Mat) -> Result<Self, CanonError> {
        Self::additive_variant(Variant::AdditiveStandard, src, dst, p, tau, q)
    }

    /// `X -> P ᵗX^τ Q` with `P` of shape `m' x n` and `Q` of shape `m x n'`.
    pub fn additive_transpose(
        src: &MatrixSpace,
        dst: &MatrixSpace,
        p: Mat,
        tau: FieldHom,
        q: Mat,
    ) -> Result<Self, CanonError> {
        Self::additive_variant(Variant::AdditiveTranspose, src, dst, p, tau, q)
    }

    fn additive_variant(
        variant: Variant,
        src: &MatrixSpace,
        dst: &MatrixSpace,
        p: Mat,
        tau: FieldHom,
        q: Mat,
    ) -> Result<Self, CanonError> {
        check_hom(src, dst, &tau)?;
        let (inner_rows, inner_cols) = match variant {
            Variant::AdditiveStandard => (src.rows(), src.cols()),
            _ => (src.cols(), src.rows()),
        };
        expect_shape("P", &p, dst.rows(), inner_rows)?;
        expect_shape("Q", &q, inner_cols, dst.cols())?;
        if p.rank() < 2 {
            return Err(CanonError::RankTooSmall("P"));
        }
        if q.rank() < 2 {
            return Err(CanonError::RankTooSmall("Q"));
        }
        Ok(CanonicalForm {
            variant,
            src: src.clone(),
            dst: dst.clone(),
            p,
            q,
            tau,
            l: None,
            a0: None,
            offset: None,
        })
    }

    /// The unshifted Šemrl form, standard or transposed.
    pub fn semrl(
        src: &MatrixSpace,
        dst: &MatrixSpace,
        p: Mat,
        q: Mat,
        tau: FieldHom,
        l: Mat,
        transpose: bool,
    ) -> Result<Self, CanonError> {
        let variant = if transpose {
            Variant::SemrlTranspose
        } else {
            Variant::SemrlStandard
        };
        Self::semrl_variant(variant, src, dst, p, q, tau, l, None, None)
    }

    /// The shifted Šemrl form with `φ(A0) = offset`.
    #[allow(clippy::too_many_arguments)]
    pub fn shifted_semrl(
        src: &MatrixSpace,
        dst: &MatrixSpace,
        p: Mat,
        q: Mat,
        tau: FieldHom,
        l: Mat,
        a0: Mat,
        offset: Mat,
        transpose: bool,
    ) -> Result<Self, CanonError> {
        let variant = if transpose {
            Variant::ShiftedSemrlTranspose
        } else {
            Variant::ShiftedSemrlStandard
        };
        Self::semrl_variant(variant, src, dst, p, q, tau, l, Some(a0), Some(offset))
    }

    #[allow(clippy::too_many_arguments)]
    fn semrl_variant(
        variant: Variant,
        src: &MatrixSpace,
        dst: &MatrixSpace,
        p: Mat,
        q: Mat,
        tau: FieldHom,
        l: Mat,
        a0: Option<Mat>,
        offset: Option<Mat>,
    ) -> Result<Self, CanonError> {
        check_hom(src, dst, &tau)?;
        let n = src.rows();
        if src.cols() != n {
            return Err(CanonError::Shape("Šemrl forms need a square source".into()));
        }
        if dst.rows() < n || dst.cols() < n {
            return Err(CanonError::Shape(format!(
                "destination {}x{} is smaller than {n}x{n}",
                dst.rows(),
                dst.cols()
            )));
        }
        expect_shape("P", &p, dst.rows(), dst.rows())?;
        expect_shape("Q", &q, dst.cols(), dst.cols())?;
        expect_shape("L", &l, n, n)?;
        if !p.is_invertible() {
            return Err(CanonError::NotInvertible("P"));
        }
        if !q.is_invertible() {
            return Err(CanonError::NotInvertible("Q"));
        }
        if let Some(a0) = &a0 {
            src.check(a0)?;
        }
        if let Some(c) = &offset {
            dst.check(c)?;
        }
        if let Some(bad) = first_singular(&tau, &l) {
            return Err(CanonError::InvalidL(bad.to_string()));
        }
        Ok(CanonicalForm {
            variant,
            src: src.clone(),
            dst: dst.clone(),
            p,
            q,
            tau,
            l: Some(l),
            a0,
            offset,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn src(&self) -> &MatrixSpace {
        &self.src
    }

    pub fn dst(&self) -> &MatrixSpace {
        &self.dst
    }

    pub fn p(&self) -> &Mat {
        &self.p
    }

    pub fn q(&self) -> &Mat {
        &self.q
    }

    pub fn tau(&self) -> &FieldHom {
        &self.tau
    }

    pub fn l(&self) -> Option<&Mat> {
        self.l.as_ref()
    }

    pub fn a0(&self) -> Option<&Mat> {
        self.a0.as_ref()
    }

    pub fn offset(&self) -> Option<&Mat> {
        self.offset.as_ref()
    }

    pub fn eval(&self, x: &Mat) -> Result<Mat, CanonError> {
        self.src.check(x)?;
        let xt = x.map_entries(&self.tau);
        let out = match self.variant {
            Variant::AdditiveStandard => self.p.mul(&xt).mul(&self.q),
            Variant::AdditiveTranspose => self.p.mul(&xt.transpose()).mul(&self.q),
            _ => {
                let l = self.l.as_ref().unwrap();
                let n = self.src.rows();
                let id = Mat::identity(self.dst.field(), n);
                let shift = match &self.a0 {
                    Some(a0) => a0.map_entries(&self.tau),
                    None => Mat::zeros(self.dst.field(), n, n),
                };
                let core = if self.variant.is_transpose() {
                    let y = xt.transpose();
                    let inv = id
                        .add(&l.mul(&y))
                        .inverse()
                        .ok_or_else(|| CanonError::InvalidL(x.to_string()))?;
                    y.sub(&shift.transpose()).mul(&inv)
                } else {
                    let inv = id
                        .add(&xt.mul(l))
                        .inverse()
                        .ok_or_else(|| CanonError::InvalidL(x.to_string()))?;
                    inv.mul(&xt.sub(&shift))
                };
                let body = self.p.mul(&core.embed(self.dst.rows(), self.dst.cols())).mul(&self.q);
                match &self.offset {
                    Some(c) => body.add(c),
                    None => body,
                }
            }
        };
        Ok(out)
    }

    pub fn tabulate(&self, cap: u64) -> Result<MapTable, CanonError> {
        let n = self.src.ensure_within(cap)?;
        let images = (0..n)
            .into_par_iter()
            .map(|i| self.eval(&self.src.decode(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MapTable::new(&self.src, &self.dst, images).expect("tabulated images fit the destination"))
    }

    pub fn describe(&self) -> String {
        let mut s = format!(
            "form {} P={} Q={} tau={}",
            self.variant.name(),
            self.p,
            self.q,
            hom_label(&self.tau)
        );
        if let Some(l) = &self.l {
            s.push_str(&format!(" L={l}"));
        }
        if let Some(a0) = &self.a0 {
            s.push_str(&format!(" A0={a0}"));
        }
        if let Some(c) = &self.offset {
            s.push_str(&format!(" offset={c}"));
        }
        s
    }
}

/// `src>dst:i`, where `i` is the position of `tau` among the enumerated
/// homomorphisms.
pub fn hom_label(tau: &FieldHom) -> String {
    let i = enumerate_field_homs(tau.src(), tau.dst())
        .iter()
        .position(|h| h == tau)
        .map(|i| i.to_string())
        .unwrap_or_else(|| "?".into());
    format!("{}>{}:{i}", tau.src().order(), tau.dst().order())
}

/// Some `X` with `I + X^τ L` singular, if any.
fn first_singular(tau: &FieldHom, l: &Mat) -> Option<Mat> {
    let n = l.rows();
    let space = MatrixSpace::new(tau.src(), n, n);
    let id = Mat::identity(tau.dst(), n);
    let found = space
        .iter()
        .find(|x| !id.add(&x.map_entries(tau).mul(l)).is_invertible());
    found
}

/// Every `L` over the destination with `I + X^τ L` invertible for all `X`,
/// in encoding order.
pub fn valid_ls(tau: &FieldHom, n: usize, cap: u64) -> Result<Vec<Mat>, CanonError> {
    let src = MatrixSpace::new(tau.src(), n, n);
    let dst = MatrixSpace::new(tau.dst(), n, n);
    src.ensure_within(cap)?;
    let count = dst.ensure_within(cap)?;
    let mut images: Vec<Mat> = src.iter().map(|x| x.map_entries(tau)).collect();
    images.sort_by_key(|m| dst.encode(m));
    images.dedup();
    let id = Mat::identity(tau.dst(), n);
    let ok = |m: &Mat| {
        if n == 2 {
            m.det2() != 0
        } else {
            m.is_invertible()
        }
    };
    let out = (0..count)
        .into_par_iter()
        .map(|i| dst.decode(i))
        .filter(|l| images.iter().all(|x| ok(&id.add(&x.mul(l)))))
        .collect();
    Ok(out)
}

/// Elements `β_0, ..., β_{m-1}` of `k` independent over the image of `iota`.
fn basis_over(iota: &FieldHom, m: usize) -> Vec<Elem> {
    let k = iota.dst();
    let small: Vec<Elem> = iota.table().to_vec();
    let mut basis: Vec<Elem> = Vec::new();
    let mut span: Vec<Elem> = vec![0];
    for e in k.elements() {
        if basis.len() == m {
            break;
        }
        if span.contains(&e) {
            continue;
        }
        basis.push(e);
        let mut next = Vec::with_capacity(span.len() * small.len());
        for &s in &span {
            for &c in &small {
                next.push(k.add(s, k.mul(c, e)));
            }
        }
        next.sort_unstable();
        next.dedup();
        span = next;
    }
    basis
}

/// A proper colouring of `src` into the clique `target`.
///
/// Columns of `X` are read as elements of `GF(q^m)` and combined with the
/// independent `weights`; the colour indexes a point of `target`.
pub fn make_colouring(
    src: &MatrixSpace,
    target: &MaximalSet,
    weights: Option<&[Elem]>,
) -> Result<MapTable, CanonError> {
    if src.cols() > src.rows() {
        let t = MatrixSpace::new(src.field(), src.cols(), src.rows());
        let inner = make_colouring(&t, target, weights)?;
        let images = src.iter().map(|x| inner.image(&x.transpose()).clone()).collect();
        let table = MapTable::new(src, &target.space(), images).expect("same destination");
        return verify_colouring(table);
    }
    let f = src.field();
    let (m, n) = (src.rows(), src.cols());
    let order = (f.order() as u64).pow(m as u32);
    let k = Field::standard(order).map_err(|_| CanonError::NoExtension(order))?;
    let iota = enumerate_field_homs(f, &k)
        .into_iter()
        .next()
        .ok_or(CanonError::NoExtension(order))?;
    let beta = basis_over(&iota, m);
    let delta: Vec<Elem> = match weights {
        Some(w) => {
            if w.len() != n {
                return Err(CanonError::Shape(format!("expected {n} weights, got {}", w.len())));
            }
            for &x in w {
                k.check(x as u64).map_err(MatError::from)?;
            }
            w.to_vec()
        }
        None => beta[..n].to_vec(),
    };
    let points = target.points();
    if points.len() < order as usize {
        return Err(CanonError::TargetTooSmall {
            have: points.len(),
            need: order as usize,
        });
    }
    let xi = |col: &[Elem]| {
        col.iter()
            .zip(&beta)
            .fold(0, |acc, (&c, &b)| k.add(acc, k.mul(iota.apply(c), b)))
    };
    let images = src
        .iter()
        .map(|x| {
            let colour = (0..n).fold(0, |acc, j| k.add(acc, k.mul(delta[j], xi(&x.col(j)))));
            points[colour as usize].clone()
        })
        .collect();
    let table = MapTable::new(src, &target.space(), images).expect("points lie in the target space");
    verify_colouring(table)
}

fn verify_colouring(table: MapTable) -> Result<MapTable, CanonError> {
    match is_graph_hom(&table) {
        Ok(()) => Ok(table),
        Err((a, b)) => Err(CanonError::ImproperColouring(format!("{a} and {b} share a colour"))),
    }
}
