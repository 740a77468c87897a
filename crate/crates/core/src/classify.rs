//! Explicit maps between matrix spaces and the decision ladder that says
//! what kind of homomorphism a map is.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{valid_ls, CanonicalForm};
use crate::fields::{enumerate_field_homs, Elem, Field, FieldError, FieldHom, FieldSpec};
use crate::geometry::{ball, maximal_sets_containing_pair, maximal_sets_through, Kind, MatrixGraph, MaximalSet};
use crate::matrices::{minus_le, Mat, MatError, MatrixSpace, DEFAULT_STATE_CAP};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("table has {got} entries, expected {expected}")]
    NotTotal { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("outside the supported regime: {0}")]
    OutOfRegime(String),
    #[error(transparent)]
    Mat(#[from] MatError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A total map from every matrix of `src` to a matrix of `dst`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapTable {
    src: MatrixSpace,
    dst: MatrixSpace,
    images: Vec<Mat>,
}

impl MapTable {
    /// `images[i]` is the image of the source matrix with encoding `i`.
    pub fn new(src: &MatrixSpace, dst: &MatrixSpace, images: Vec<Mat>) -> Result<MapTable, ClassifyError> {
        let expected = src.ensure_within(u64::MAX)?;
        if images.len() != expected {
            return Err(ClassifyError::NotTotal {
                expected,
                got: images.len(),
            });
        }
        for y in &images {
            dst.check(y)?;
        }
        Ok(MapTable {
            src: src.clone(),
            dst: dst.clone(),
            images,
        })
    }

    pub fn from_fn(
        src: &MatrixSpace,
        dst: &MatrixSpace,
        cap: u64,
        f: impl Fn(&Mat) -> Mat + Sync,
    ) -> Result<MapTable, ClassifyError> {
        let n = src.ensure_within(cap)?;
        let images = (0..n).into_par_iter().map(|i| f(&src.decode(i))).collect();
        MapTable::new(src, dst, images)
    }

    /// Builds a table from destination encodings.
    pub fn from_codes(src: &MatrixSpace, dst: &MatrixSpace, codes: &[usize]) -> Result<MapTable, ClassifyError> {
        MapTable::new(src, dst, codes.iter().map(|&c| dst.decode(c)).collect())
    }

    pub fn identity(space: &MatrixSpace) -> MapTable {
        MapTable {
            src: space.clone(),
            dst: space.clone(),
            images: space.iter().collect(),
        }
    }

    pub fn constant(src: &MatrixSpace, dst: &MatrixSpace, c: &Mat) -> MapTable {
        MapTable::new(src, dst, vec![c.clone(); src.size() as usize]).expect("constant fits")
    }

    pub fn src(&self) -> &MatrixSpace {
        &self.src
    }

    pub fn dst(&self) -> &MatrixSpace {
        &self.dst
    }

    pub fn images(&self) -> &[Mat] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, x: &Mat) -> &Mat {
        &self.images[self.src.encode(x)]
    }

    pub fn image_at(&self, code: usize) -> &Mat {
        &self.images[code]
    }

    pub fn codes(&self) -> Vec<usize> {
        self.images.iter().map(|y| self.dst.encode(y)).collect()
    }

    /// Distinct images sorted by encoding.
    pub fn image_set(&self) -> Vec<Mat> {
        let mut codes = self.codes();
        codes.sort_unstable();
        codes.dedup();
        codes.into_iter().map(|c| self.dst.decode(c)).collect()
    }

    /// `Y -> f(ᵗY)` on the transposed source space.
    pub fn precompose_transpose(&self) -> MapTable {
        let t = MatrixSpace::new(self.src.field(), self.src.cols(), self.src.rows());
        let images = t.iter().map(|y| self.image(&y.transpose()).clone()).collect();
        MapTable {
            src: t,
            dst: self.dst.clone(),
            images,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("maptable v1\n");
        writeln!(out, "src {}", self.src.field().spec()).unwrap();
        writeln!(out, "src shape {} {}", self.src.rows(), self.src.cols()).unwrap();
        writeln!(out, "dst {}", self.dst.field().spec()).unwrap();
        writeln!(out, "dst shape {} {}", self.dst.rows(), self.dst.cols()).unwrap();
        for (i, y) in self.images.iter().enumerate() {
            writeln!(out, "{} => {}", self.src.decode(i), y).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<MapTable, ClassifyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (src, dst, mut lines) = parse_header(&mut lines, "maptable v1")?;
        let n = src.ensure_within(DEFAULT_STATE_CAP).map_err(|e| ClassifyError::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        let mut images: Vec<Option<Mat>> = vec![None; n];
        for (line, l) in &mut lines {
            let (a, b) = parse_arrow(line, l, &src, &dst)?;
            let slot = &mut images[src.encode(&a)];
            if slot.is_some() {
                return Err(ClassifyError::Parse {
                    line,
                    msg: format!("duplicate entry for {a}"),
                });
            }
            *slot = Some(b);
        }
        let got = images.iter().filter(|x| x.is_some()).count();
        if got != n {
            return Err(ClassifyError::NotTotal { expected: n, got });
        }
        MapTable::new(&src, &dst, images.into_iter().map(Option::unwrap).collect())
    }
}

type Lines<'a> = dyn Iterator<Item = (usize, &'a str)> + 'a;

fn perr(line: usize, msg: impl Into<String>) -> ClassifyError {
    ClassifyError::Parse { line, msg: msg.into() }
}

/// Reads the magic line and the four field/shape lines shared by map tables
/// and search problems.
pub(crate) fn parse_header<'a, 'b>(
    lines: &'b mut Lines<'a>,
    magic: &str,
) -> Result<(MatrixSpace, MatrixSpace, &'b mut Lines<'a>), ClassifyError> {
    let mut next = |what: &str| lines.next().ok_or_else(|| perr(0, format!("missing {what}")));
    let (line, l) = next("header")?;
    if l != magic {
        return Err(perr(line, format!("expected `{magic}`")));
    }
    let mut spaces = Vec::new();
    for side in ["src", "dst"] {
        let (line, l) = next("field line")?;
        let spec = l
            .strip_prefix(side)
            .ok_or_else(|| perr(line, format!("expected `{side} field ...`")))?;
        let spec = FieldSpec::from_str(spec.trim()).map_err(|e| perr(line, e.to_string()))?;
        let field = Field::new(spec);
        let (line, l) = next("shape line")?;
        let dims: Vec<usize> = l
            .strip_prefix(side)
            .and_then(|r| r.trim().strip_prefix("shape"))
            .ok_or_else(|| perr(line, format!("expected `{side} shape <m> <n>`")))?
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| perr(line, format!("bad dimension `{t}`")))
            })
            .collect::<Result<_, _>>()?;
        if dims.len() != 2 || dims.contains(&0) {
            return Err(perr(line, "shape needs two positive dimensions"));
        }
        spaces.push(MatrixSpace::new(&field, dims[0], dims[1]));
    }
    let dst = spaces.pop().unwrap();
    let src = spaces.pop().unwrap();
    Ok((src, dst, lines))
}

pub(crate) fn parse_arrow(
    line: usize,
    l: &str,
    src: &MatrixSpace,
    dst: &MatrixSpace,
) -> Result<(Mat, Mat), ClassifyError> {
    let (a, b) = l
        .split_once("=>")
        .ok_or_else(|| perr(line, "expected `<src> => <dst>`"))?;
    let a = src.parse(a.trim()).map_err(|e| perr(line, e.to_string()))?;
    let b = dst.parse(b.trim()).map_err(|e| perr(line, e.to_string()))?;
    Ok((a, b))
}

/// The first edge (in encoding order) whose images are not adjacent.
pub fn is_graph_hom(f: &MapTable) -> Result<(), (Mat, Mat)> {
    let graph = MatrixGraph::new(f.src(), u64::MAX).expect("source fits in memory");
    is_graph_hom_on(f, &graph)
}

/// [`is_graph_hom`] with a prebuilt source graph.
pub fn is_graph_hom_on(f: &MapTable, graph: &MatrixGraph) -> Result<(), (Mat, Mat)> {
    for (a, b) in graph.edges() {
        if f.image_at(a).sub(f.image_at(b)).rank() != 1 {
            return Err((f.src.decode(a), f.src.decode(b)));
        }
    }
    Ok(())
}

/// Additive generators: each matrix unit scaled by each prime-field basis element.
fn additive_generators(space: &MatrixSpace) -> Vec<Mat> {
    let f = space.field();
    let p = f.characteristic() as usize;
    let mut out = Vec::new();
    for i in 0..space.rows() {
        for j in 0..space.cols() {
            for e in 0..f.degree() {
                out.push(space.unit(i, j).scale(p.pow(e) as Elem));
            }
        }
    }
    out
}

/// Decides `f(A + B) = f(A) + f(B)` for all pairs. Checking every `A`
/// against a set of additive generators `g` is equivalent. Returns a
/// violating `(A, g)` otherwise.
pub fn is_additive(f: &MapTable) -> Result<(), (Mat, Mat)> {
    let gens = additive_generators(f.src());
    for a in f.src().iter() {
        for g in &gens {
            if f.image(&a.add(g)) != &f.image(&a).add(f.image(g)) {
                return Err((a, g.clone()));
            }
        }
    }
    Ok(())
}

/// Whether all distinct images are pairwise adjacent.
pub fn image_is_adjacent_set(f: &MapTable) -> bool {
    let img = f.image_set();
    img.iter()
        .enumerate()
        .all(|(i, a)| img[i + 1..].iter().all(|b| a.sub(b).rank() == 1))
}

/// A homomorphism whose image is an adjacent set.
pub fn is_colouring(f: &MapTable) -> bool {
    is_graph_hom(f).is_ok() && image_is_adjacent_set(f)
}

/// The maximal set holding an adjacent image set of at least two points.
pub fn containing_clique(points: &[Mat]) -> Option<MaximalSet> {
    let (a, b) = (points.first()?, points.get(1)?);
    let (m, n) = maximal_sets_containing_pair(a, b).ok()?;
    [m, n].into_iter().find(|s| points.iter().all(|p| s.contains(p)))
}

pub fn is_distance_preserving(f: &MapTable, cap: u64) -> Result<bool, ClassifyError> {
    let n = f.len() as u128;
    if n * n / 2 > cap as u128 {
        return Err(MatError::CapExceeded { size: n * n / 2, cap }.into());
    }
    let src = f.src();
    Ok((0..f.len()).into_par_iter().all(|i| {
        let a = src.decode(i);
        (i + 1..f.len()).all(|j| a.sub(&src.decode(j)).rank() == f.image_at(i).sub(f.image_at(j)).rank())
    }))
}

/// Pairs violating `d(f(A), f(B)) <= d(A, B)`.
pub fn contraction_violations(f: &MapTable) -> Vec<(Mat, Mat)> {
    let src = f.src();
    (0..f.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let a = src.decode(i);
            (i + 1..f.len())
                .filter(move |&j| f.image_at(i).sub(f.image_at(j)).rank() > a.sub(&src.decode(j)).rank())
                .map(move |j| (src.decode(i), src.decode(j)))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateWitness {
    pub a: Mat,
    pub m: MaximalSet,
    pub n: MaximalSet,
}

/// The first `(A, M, N)` with `rank(A) <= 1`, `M` row type and `N` column
/// type through `f(A)`, and `f(ball(A)) ⊆ M ∪ N`.
pub fn is_degenerate(f: &MapTable) -> Option<DegenerateWitness> {
    let src = f.src();
    let mut low: Vec<Mat> = std::iter::once(src.zero()).chain(src.rank_one()).collect();
    low.sort_by_key(|a| src.encode(a));
    low.into_iter().find_map(|a| {
        let y = f.image(&a).clone();
        let img: Vec<Mat> = {
            let mut v: Vec<Mat> = ball(&a)
                .iter()
                .map(|x| f.image(x).clone())
                .filter(|z| z != &y)
                .collect();
            v.sort_by_key(|z| f.dst().encode(z));
            v.dedup();
            v
        };
        if img.iter().any(|z| z.sub(&y).rank() != 1) {
            return None;
        }
        let sets = maximal_sets_through(&y);
        let rows: Vec<&MaximalSet> = sets.iter().filter(|s| s.kind() == Kind::Row).collect();
        let cols: Vec<&MaximalSet> = sets.iter().filter(|s| s.kind() == Kind::Col).collect();
        for m in &rows {
            let rest: Vec<&Mat> = img.iter().filter(|z| !m.contains(z)).collect();
            if let Some(n) = cols.iter().find(|n| rest.iter().all(|z| n.contains(z))) {
                return Some(DegenerateWitness {
                    a: a.clone(),
                    m: (*m).clone(),
                    n: (*n).clone(),
                });
            }
        }
        None
    })
}

/// Image contained in `(M + R) ∪ (N + R)` with `M`, `N` of different types
/// through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub m: MaximalSet,
    pub n: MaximalSet,
    pub r: Mat,
}

impl Decomposition {
    pub fn covers(&self, f: &MapTable) -> bool {
        f.image_set().iter().all(|y| {
            let d = y.sub(&self.r);
            self.m.contains(&d) || self.n.contains(&d)
        })
    }
}

/// Finds `M`, `N`, `R` covering the image of `f`, if they exist.
pub fn range_decomposition(f: &MapTable) -> Option<Decomposition> {
    let img = f.image_set();
    let origin = f.dst().zero();
    let at_origin = |s: &MaximalSet| match s.kind() {
        Kind::Row => MaximalSet::row(s.direction(), &origin).unwrap(),
        Kind::Col => MaximalSet::col(s.direction(), &origin).unwrap(),
    };
    if image_is_adjacent_set(f) {
        let r = img[0].clone();
        let clique = containing_clique(&img).unwrap_or_else(|| maximal_sets_through(&r).remove(0));
        let other = maximal_sets_through(&r)
            .into_iter()
            .find(|s| s.kind() != clique.kind())
            .unwrap();
        let (m, n) = match clique.kind() {
            Kind::Row => (clique, other),
            Kind::Col => (other, clique),
        };
        let d = Decomposition {
            m: at_origin(&m),
            n: at_origin(&n),
            r,
        };
        return d.covers(f).then_some(d);
    }
    let (y1, y2) = img.iter().enumerate().find_map(|(i, a)| {
        img[i + 1..]
            .iter()
            .find(|b| a.sub(b).rank() == 2)
            .map(|b| (a.clone(), b.clone()))
    })?;
    let candidates = ball(&y1).into_iter().filter(|r| r.sub(&y2).rank() == 1);
    for r in candidates {
        if r == y1 || r == y2 {
            continue;
        }
        let (row1, col1) = maximal_sets_containing_pair(&r, &y1).ok()?;
        let (row2, col2) = maximal_sets_containing_pair(&r, &y2).ok()?;
        for (m, n) in [(row1, col2), (row2, col1)] {
            let d = Decomposition {
                m: at_origin(&m),
                n: at_origin(&n),
                r: r.clone(),
            };
            if d.covers(f) {
                return Some(d);
            }
        }
    }
    None
}

/// Some `(A0, B0)` with `rank(f(B0) - f(A0))` equal to the source size `n`
/// of a square source.
pub fn full_rank_image_pair(f: &MapTable) -> Option<(Mat, Mat)> {
    let src = f.src();
    if src.rows() != src.cols() {
        return None;
    }
    let n = src.rows();
    (0..f.len()).find_map(|i| {
        (i + 1..f.len())
            .find(|&j| f.image_at(i).sub(f.image_at(j)).rank() == n)
            .map(|j| (src.decode(i), src.decode(j)))
    })
}

fn normalize_in_place(f: &Field, v: &mut [Elem]) -> Option<(usize, Elem)> {
    let l = v.iter().position(|&x| x != 0)?;
    let lead = v[l];
    let inv = f.inv(lead).unwrap();
    for x in v.iter_mut() {
        *x = f.mul(inv, *x);
    }
    Some((l, lead))
}

/// Fits `f(X) = P X^τ Q` by reading `P` and `Q` off the images of matrix units.
fn fit_additive_standard(f: &MapTable) -> Option<(Mat, FieldHom, Mat)> {
    let (src, dst) = (f.src(), f.dst());
    let k = dst.field();
    let (m, n) = (src.rows(), src.cols());
    let e11 = f.image(&src.unit(0, 0));
    if e11.rank() != 1 {
        return None;
    }
    let j0 = (0..e11.cols()).find(|&j| e11.col(j).iter().any(|&x| x != 0))?;
    let mut p1 = e11.col(j0);
    let (l, _) = normalize_in_place(k, &mut p1)?;
    let q1 = e11.row(l);
    let kpiv = q1.iter().position(|&x| x != 0)?;
    let q1k_inv = k.inv(q1[kpiv]).unwrap();
    let mut p = Mat::zeros(k, dst.rows(), m);
    for i in 0..m {
        let img = f.image(&src.unit(i, 0));
        for r in 0..dst.rows() {
            p.set(r, i, k.mul(img.get(r, kpiv), q1k_inv));
        }
    }
    let mut q = Mat::zeros(k, n, dst.cols());
    for j in 0..n {
        let img = f.image(&src.unit(0, j));
        for c in 0..dst.cols() {
            q.set(j, c, img.get(l, c));
        }
    }
    let table: Vec<Elem> = src
        .field()
        .elements()
        .map(|x| k.mul(f.image(&src.unit(0, 0).scale(x)).get(l, kpiv), q1k_inv))
        .collect();
    let tau = enumerate_field_homs(src.field(), k)
        .into_iter()
        .find(|h| h.table() == table.as_slice())?;
    Some((p, tau, q))
}

/// Recovers `P`, `τ`, `Q` of an additive form, standard orientation first.
/// Every returned form re-tabulates to exactly `f`.
pub fn recover_additive(f: &MapTable) -> Option<CanonicalForm> {
    if let Some((p, tau, q)) = fit_additive_standard(f) {
        if let Ok(form) = CanonicalForm::additive(f.src(), f.dst(), p, tau, q) {
            if form.tabulate(u64::MAX).ok().as_ref() == Some(f) {
                return Some(form);
            }
        }
    }
    let g = f.precompose_transpose();
    let (p, tau, q) = fit_additive_standard(&g)?;
    let form = CanonicalForm::additive_transpose(f.src(), f.dst(), p, tau, q).ok()?;
    (form.tabulate(u64::MAX).ok().as_ref() == Some(f)).then_some(form)
}

/// Every vector of the span of `basis` over `k`, in a fixed order.
fn span_vectors(k: &Field, basis: &[Vec<Elem>], limit: usize) -> Vec<Vec<Elem>> {
    let q = k.order();
    let d = basis.len();
    let total = q.checked_pow(d as u32).unwrap_or(usize::MAX).min(limit);
    let len = basis.first().map_or(0, Vec::len);
    (1..total)
        .map(|mut idx| {
            let mut v = vec![0; len];
            for b in basis {
                let c = (idx % q) as Elem;
                idx /= q;
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = k.add(*x, k.mul(c, y));
                }
            }
            v
        })
        .collect()
}

/// Extends the columns of `a` (full column rank) to an invertible matrix.
fn extend_columns(a: &Mat) -> Mat {
    let k = a.field();
    let mut cols: Vec<Vec<Elem>> = (0..a.cols()).map(|j| a.col(j)).collect();
    for e in 0..a.rows() {
        if cols.len() == a.rows() {
            break;
        }
        let mut unit = vec![0; a.rows()];
        unit[e] = 1;
        cols.push(unit);
        let data: Vec<Elem> = (0..a.rows()).flat_map(|r| cols.iter().map(move |c| c[r])).collect();
        if Mat::from_vec(k, a.rows(), cols.len(), data).unwrap().rank() < cols.len() {
            cols.pop();
        }
    }
    let data: Vec<Elem> = (0..a.rows()).flat_map(|r| cols.iter().map(move |c| c[r])).collect();
    Mat::from_vec(k, a.rows(), a.rows(), data).unwrap()
}

/// The Šemrl core `h(X)` for a given orientation.
fn semrl_core(x: &Mat, a0: &Mat, tau: &FieldHom, l: &Mat, transpose: bool) -> Option<Mat> {
    let n = x.rows();
    let id = Mat::identity(tau.dst(), n);
    let xt = x.map_entries(tau);
    let at = a0.map_entries(tau);
    if transpose {
        let y = xt.transpose();
        Some(y.sub(&at.transpose()).mul(&id.add(&l.mul(&y)).inverse()?))
    } else {
        Some(id.add(&xt.mul(l)).inverse()?.mul(&xt.sub(&at)))
    }
}

/// Solves `f(X) - c = P [h(X) ⊕ 0] Q` for invertible `P`, `Q`.
fn fit_semrl(f: &MapTable, a0: &Mat, hs: &[Mat]) -> Option<(Mat, Mat)> {
    let (src, dst) = (f.src(), f.dst());
    let k = dst.field();
    let n = src.rows();
    let c = f.image(a0);
    let star = a0.add(&src.diag_ones(n));
    let fstar = f.image(&star).sub(c);
    if fstar.rank() != n {
        return None;
    }
    let nf = fstar.normal_form();
    let pinv = nf.p.inverse().unwrap();
    let qinv = nf.q.inverse().unwrap();
    let w0 = nf.p.block(dst.rows(), n);
    let v0 = nf.q.block(n, dst.cols());
    let w0_left = pinv.block(n, dst.rows());
    let v0_right = qinv.block(dst.cols(), n);
    // C(X) U - S h(X) = 0 over unknowns (S, U), one block of n^2 rows per X.
    let unknowns = 2 * n * n;
    let mut rows: Vec<Elem> = Vec::new();
    let mut count = 0;
    for (i, h) in hs.iter().enumerate() {
        let core = w0_left.mul(&f.image_at(i).sub(c)).mul(&v0_right);
        for r in 0..n {
            for s in 0..n {
                let mut row = vec![0; unknowns];
                for t in 0..n {
                    row[r * n + t] = k.neg(h.get(t, s));
                    row[n * n + t * n + s] = core.get(r, t);
                }
                rows.extend(row);
                count += 1;
            }
        }
    }
    let system = Mat::from_vec(k, count, unknowns, rows).ok()?;
    let kernel = system.kernel();
    for v in span_vectors(k, &kernel, 1 << 12) {
        let s = Mat::from_vec(k, n, n, v[..n * n].to_vec()).unwrap();
        let u = Mat::from_vec(k, n, n, v[n * n..].to_vec()).unwrap();
        let Some(u_inv) = u.inverse() else { continue };
        if !s.is_invertible() {
            continue;
        }
        let p1 = w0.mul(&s);
        let q1 = u_inv.mul(&v0);
        let p = extend_columns(&p1);
        let q = extend_columns(&q1.transpose()).transpose();
        return Some((p, q));
    }
    None
}

/// Largest source size and destination order handled by [`recover_semrl`].
pub const SEMRL_MAX_N: usize = 2;
pub const SEMRL_MAX_DST_ORDER: usize = 4;

/// Recovers a (possibly shifted) Šemrl form that re-tabulates to `f`.
pub fn recover_semrl(f: &MapTable) -> Result<Option<CanonicalForm>, ClassifyError> {
    let (src, dst) = (f.src(), f.dst());
    let n = src.rows();
    if src.cols() != n {
        return Err(ClassifyError::Precondition("source must be square".into()));
    }
    if n != SEMRL_MAX_N || dst.q() > SEMRL_MAX_DST_ORDER {
        return Err(ClassifyError::OutOfRegime(format!(
            "needs n = {SEMRL_MAX_N} and q' <= {SEMRL_MAX_DST_ORDER}"
        )));
    }
    if dst.rows() < n || dst.cols() < n {
        return Ok(None);
    }
    if full_rank_image_pair(f).is_none() {
        return Err(ClassifyError::Precondition("no image pair at distance n".into()));
    }
    let homs: Vec<(FieldHom, Vec<Mat>)> = enumerate_field_homs(src.field(), dst.field())
        .into_iter()
        .map(|tau| {
            let ls = valid_ls(&tau, n, DEFAULT_STATE_CAP).unwrap_or_default();
            (tau, ls)
        })
        .collect();
    let xs: Vec<Mat> = src.iter().collect();
    // Encoding order puts A0 = 0 first.
    for a0 in &xs {
        let c = f.image(a0);
        // Every Šemrl form has rank(f(X) - f(A0)) = rank(X - A0).
        if xs
            .iter()
            .enumerate()
            .any(|(i, x)| f.image_at(i).sub(c).rank() != x.sub(a0).rank())
        {
            continue;
        }
        for transpose in [false, true] {
            for (tau, ls) in &homs {
                for l in ls {
                    let hs: Option<Vec<Mat>> = xs.iter().map(|x| semrl_core(x, a0, tau, l, transpose)).collect();
                    let Some(hs) = hs else { continue };
                    let Some((p, q)) = fit_semrl(f, a0, &hs) else { continue };
                    let form = if a0.is_zero() && c.is_zero() {
                        CanonicalForm::semrl(src, dst, p, q, tau.clone(), l.clone(), transpose)
                    } else {
                        CanonicalForm::shifted_semrl(
                            src,
                            dst,
                            p,
                            q,
                            tau.clone(),
                            l.clone(),
                            a0.clone(),
                            c.clone(),
                            transpose,
                        )
                    };
                    let Ok(form) = form else { continue };
                    if form.tabulate(u64::MAX).ok().as_ref() == Some(f) {
                        return Ok(Some(form));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotGraphHom {
        a: Mat,
        b: Mat,
    },
    Colouring {
        clique: MaximalSet,
    },
    Additive(CanonicalForm),
    Semrl(CanonicalForm),
    DegenerateNonColouring {
        witness: DegenerateWitness,
        decomposition: Option<Decomposition>,
    },
    DistancePreservingOther,
    HomOther,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NotGraphHom { .. } => "not-graph-hom",
            Verdict::Colouring { .. } => "colouring",
            Verdict::Additive(f) if f.variant().is_transpose() => "additive-transpose",
            Verdict::Additive(_) => "additive-standard",
            Verdict::Semrl(f) if f.variant().is_transpose() => "semrl-transpose",
            Verdict::Semrl(_) => "semrl-standard",
            Verdict::DegenerateNonColouring { .. } => "degenerate-non-colouring",
            Verdict::DistancePreservingOther => "distance-preserving-other",
            Verdict::HomOther => "hom-other",
        }
    }

    pub fn form(&self) -> Option<&CanonicalForm> {
        match self {
            Verdict::Additive(f) | Verdict::Semrl(f) => Some(f),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub evidence: Vec<String>,
}

impl Classification {
    pub fn render(&self) -> String {
        let mut out = format!("verdict {}\n", self.verdict.name());
        for e in &self.evidence {
            out.push_str(e);
            out.push('\n');
        }
        out
    }
}

/// Runs the fixed decision ladder: homomorphism, colouring, additive,
/// Šemrl, degenerate, distance-preserving, other.
pub fn classify(f: &MapTable) -> Classification {
    let mut ev = Vec::new();
    if let Err((a, b)) = is_graph_hom(f) {
        ev.push(format!("edge {a} ~ {b} maps to {} and {}", f.image(&a), f.image(&b)));
        return Classification {
            verdict: Verdict::NotGraphHom { a, b },
            evidence: ev,
        };
    }
    ev.push("graph homomorphism: every edge checked".into());
    let img = f.image_set();
    if image_is_adjacent_set(f) {
        let clique = containing_clique(&img).expect("a homomorphism has at least two images");
        ev.push(format!("image of {} points inside {}", img.len(), clique.describe()));
        return Classification {
            verdict: Verdict::Colouring { clique },
            evidence: ev,
        };
    }
    match is_additive(f) {
        Ok(()) => {
            ev.push("additive: all generator translates checked".into());
            if let Some(form) = recover_additive(f) {
                ev.push(format!("{} re-tabulates exactly", form.describe()));
                return Classification {
                    verdict: Verdict::Additive(form),
                    evidence: ev,
                };
            }
            ev.push("additive but no standard or transpose fit: theorem violation".into());
        }
        Err((a, g)) => ev.push(format!("not additive at {a} + {g}")),
    }
    if let Some((a0, b0)) = full_rank_image_pair(f) {
        ev.push(format!("full-rank image pair {a0}, {b0}"));
        match recover_semrl(f) {
            Ok(Some(form)) => {
                ev.push(format!("{} re-tabulates exactly", form.describe()));
                return Classification {
                    verdict: Verdict::Semrl(form),
                    evidence: ev,
                };
            }
            Ok(None) => ev.push("no Šemrl fit".into()),
            Err(e) => ev.push(format!("Šemrl recovery skipped: {e}")),
        }
    }
    if let Some(witness) = is_degenerate(f) {
        ev.push(format!(
            "ball({}) maps into {} and {}",
            witness.a,
            witness.m.describe(),
            witness.n.describe()
        ));
        let decomposition = range_decomposition(f);
        match &decomposition {
            Some(d) => ev.push(format!(
                "image inside ({}) + R and ({}) + R with R={}",
                d.m.describe(),
                d.n.describe(),
                d.r
            )),
            None => ev.push("no two-clique range decomposition".into()),
        }
        return Classification {
            verdict: Verdict::DegenerateNonColouring { witness, decomposition },
            evidence: ev,
        };
    }
    ev.push("non-degenerate".into());
    match is_distance_preserving(f, DEFAULT_STATE_CAP) {
        Ok(true) => Classification {
            verdict: Verdict::DistancePreservingOther,
            evidence: ev,
        },
        Ok(false) => Classification {
            verdict: Verdict::HomOther,
            evidence: ev,
        },
        Err(e) => {
            ev.push(format!("distance check skipped: {e}"));
            Classification {
                verdict: Verdict::HomOther,
                evidence: ev,
            }
        }
    }
}

/// Violations of minus-order monotonicity and of the betweenness identity
/// `d(f(A), f(B)) = d(f(B), f(C)) - d(f(A), f(C))` on triples with
/// `d(A, B) = d(B, C) - d(A, C)` and `d(B, C) = d(f(B), f(C))`. Triples are
/// exhaustive up to `cap` and sampled with `seed` beyond it.
pub fn check_order_monotonicity(f: &MapTable, cap: u64, seed: u64) -> Result<Vec<String>, ClassifyError> {
    let src = f.src();
    let zero = src.zero();
    if !f.image(&zero).is_zero() {
        return Err(ClassifyError::Precondition("f(0) must be 0".into()));
    }
    if let Err((a, b)) = is_graph_hom(f) {
        return Err(ClassifyError::Precondition(format!("not a homomorphism at {a} ~ {b}")));
    }
    let n = f.len();
    let pairs = (n as u128) * (n as u128);
    if pairs > cap as u128 {
        return Err(MatError::CapExceeded { size: pairs, cap }.into());
    }
    let xs: Vec<Mat> = src.iter().collect();
    let d: Vec<u8> = (0..n * n)
        .into_par_iter()
        .map(|ij| xs[ij / n].sub(&xs[ij % n]).rank() as u8)
        .collect();
    let df: Vec<u8> = (0..n * n)
        .into_par_iter()
        .map(|ij| f.image_at(ij / n).sub(f.image_at(ij % n)).rank() as u8)
        .collect();
    let mut out = Vec::new();
    for (b, xb) in xs.iter().enumerate() {
        if f.image_at(b).rank() != xb.rank() {
            continue;
        }
        for (a, xa) in xs.iter().enumerate() {
            if minus_le(xa, xb).unwrap()
                && (!minus_le(f.image_at(a), f.image_at(b)).unwrap() || f.image_at(a).rank() != xa.rank())
            {
                out.push(format!(
                    "order: {xa} <= {xb} but images {} and {}",
                    f.image_at(a),
                    f.image_at(b)
                ));
            }
        }
    }
    let check = |a: usize, b: usize, c: usize| -> Option<String> {
        let (dab, dbc, dac) = (d[a * n + b] as i32, d[b * n + c] as i32, d[a * n + c] as i32);
        if dab != dbc - dac || d[b * n + c] != df[b * n + c] {
            return None;
        }
        let (fab, fbc, fac) = (df[a * n + b] as i32, df[b * n + c] as i32, df[a * n + c] as i32);
        (fab != fbc - fac).then(|| format!("betweenness: {} {} {}", xs[a], xs[b], xs[c]))
    };
    let triples = (n as u128).pow(3);
    if triples <= cap as u128 {
        let found: Vec<String> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| (0..n).flat_map(move |b| (0..n).filter_map(move |c| check(a, b, c))))
            .collect();
        out.extend(found);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cap {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            out.extend(check(a, b, c));
        }
    }
    Ok(out)
}

/// Distinct matrices among a list, preserving first occurrence.
pub fn dedup_mats(v: &[Mat]) -> Vec<Mat> {
    let mut seen = HashSet::new();
    v.iter().filter(|m| seen.insert((*m).clone())).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::make_colouring;

    fn space(q: u64, m: usize, n: usize) -> MatrixSpace {
        MatrixSpace::new(&Field::standard(q).unwrap(), m, n)
    }

    fn embedding(a: u64, b: u64) -> FieldHom {
        enumerate_field_homs(&Field::standard(a).unwrap(), &Field::standard(b).unwrap())
            .into_iter()
            .next()
            .unwrap()
    }

    #[test]
    fn text_round_trip() {
        let s = space(3, 2, 2);
        let t = MapTable::identity(&s);
        let text = t.to_text();
        assert!(text.starts_with("maptable v1\nsrc field p=3 k=1 poly=0,1\nsrc shape 2 2\n"));
        assert_eq!(MapTable::parse(&text).unwrap(), t);
        let mut lines: Vec<&str> = text.lines().collect();
        lines.pop();
        assert!(matches!(
            MapTable::parse(&lines.join("\n")),
            Err(ClassifyError::NotTotal { .. })
        ));
        let dup = format!("{text}0,0,0,0 => 0,0,0,0\n");
        assert!(matches!(MapTable::parse(&dup), Err(ClassifyError::Parse { .. })));
        assert!(MapTable::parse("maptable v2\n").is_err());
    }

    #[test]
    fn hom_checks() {
        let s = space(2, 2, 2);
        assert!(is_graph_hom(&MapTable::identity(&s)).is_ok());
        let c = MapTable::constant(&s, &s, &s.zero());
        assert_eq!(is_graph_hom(&c), Err((s.zero(), s.unit(0, 0))));
        assert!(!is_colouring(&c));
        assert!(!is_colouring(&MapTable::identity(&s)));
        assert!(is_distance_preserving(&MapTable::identity(&s), DEFAULT_STATE_CAP).unwrap());
    }

    #[test]
    fn additivity() {
        let s = space(3, 2, 2);
        let id = MapTable::identity(&s);
        assert!(is_additive(&id).is_ok());
        let shift = s.unit(1, 1);
        let shifted = MapTable::from_fn(&s, &s, DEFAULT_STATE_CAP, |x| x.add(&shift)).unwrap();
        assert!(is_additive(&shifted).is_err());
    }

    #[test]
    fn generator_check_matches_all_pairs() {
        let s = space(2, 2, 2);
        let f = MapTable::from_fn(&s, &s, DEFAULT_STATE_CAP, |x| {
            let mut y = x.clone();
            y.set(0, 0, x.get(0, 0) * x.get(1, 1));
            y
        })
        .unwrap();
        let exhaustive = s
            .iter()
            .all(|a| s.iter().all(|b| f.image(&a.add(&b)) == &f.image(&a).add(f.image(&b))));
        assert_eq!(exhaustive, is_additive(&f).is_ok());
        assert!(!exhaustive);
    }

    #[test]
    fn degeneracy() {
        let s = space(2, 2, 2);
        assert!(is_degenerate(&MapTable::identity(&s)).is_none());
        let target = MaximalSet::standard(&space(4, 2, 2), Kind::Row, 0);
        let col = make_colouring(&s, &target, None).unwrap();
        assert!(is_degenerate(&col).is_some());
        let d = range_decomposition(&col).unwrap();
        assert!(d.covers(&col));
    }

    #[test]
    fn additive_recovery() {
        let s = space(3, 2, 2);
        let f = s.field();
        let id = MapTable::identity(&s);
        let form = recover_additive(&id).unwrap();
        assert_eq!(form.p(), &Mat::identity(f, 2));
        assert_eq!(form.q(), &Mat::identity(f, 2));
        assert!(form.tau().is_identity());
        let p = Mat::from_csv(f, 2, 2, "2,1,1,1").unwrap();
        let q = Mat::from_csv(f, 2, 2, "1,0,2,2").unwrap();
        let std = CanonicalForm::additive(&s, &s, p.clone(), FieldHom::identity(f), q.clone()).unwrap();
        let t = std.tabulate(DEFAULT_STATE_CAP).unwrap();
        let got = recover_additive(&t).unwrap();
        assert_eq!(got.tabulate(DEFAULT_STATE_CAP).unwrap(), t);
        let rect = space(3, 2, 3);
        let d = space(3, 3, 3);
        let pt = Mat::from_csv(f, 3, 3, "1,0,0,0,1,0,1,1,1").unwrap();
        let qt = Mat::from_csv(f, 2, 3, "1,0,2,0,1,1").unwrap();
        let tr = CanonicalForm::additive_transpose(&rect, &d, pt, FieldHom::identity(f), qt).unwrap();
        let t = tr.tabulate(DEFAULT_STATE_CAP).unwrap();
        let got = recover_additive(&t).unwrap();
        assert!(got.variant().is_transpose());
        assert_eq!(got.tabulate(DEFAULT_STATE_CAP).unwrap(), t);
    }

    #[test]
    fn semrl_recovery() {
        let tau = embedding(2, 4);
        let src = MatrixSpace::new(tau.src(), 2, 2);
        let dst = MatrixSpace::new(tau.dst(), 2, 2);
        let k = tau.dst().clone();
        let l = Mat::unit(&k, 2, 2, 0, 0).scale(2);
        let p = Mat::from_csv(&k, 2, 2, "1,3,0,2").unwrap();
        let q = Mat::from_csv(&k, 2, 2, "1,0,1,1").unwrap();
        for transpose in [false, true] {
            let form =
                CanonicalForm::semrl(&src, &dst, p.clone(), q.clone(), tau.clone(), l.clone(), transpose).unwrap();
            let t = form.tabulate(DEFAULT_STATE_CAP).unwrap();
            let got = recover_semrl(&t).unwrap().unwrap();
            assert_eq!(got.tabulate(DEFAULT_STATE_CAP).unwrap(), t);
            let c = classify(&t);
            assert_eq!(
                c.verdict.name(),
                if transpose { "semrl-transpose" } else { "semrl-standard" }
            );
            let shifted = CanonicalForm::shifted_semrl(
                &src,
                &dst,
                p.clone(),
                q.clone(),
                tau.clone(),
                l.clone(),
                src.diag_ones(2),
                dst.unit(0, 1),
                transpose,
            )
            .unwrap();
            let t = shifted.tabulate(DEFAULT_STATE_CAP).unwrap();
            let got = recover_semrl(&t).unwrap().unwrap();
            assert_eq!(got.tabulate(DEFAULT_STATE_CAP).unwrap(), t);
        }
        let id = MapTable::identity(&space(2, 2, 2));
        let got = recover_semrl(&id).unwrap().unwrap();
        assert!(got.l().unwrap().is_zero());
        assert!(got.tau().is_identity());
    }

    #[test]
    fn ladder() {
        let s = space(2, 2, 2);
        assert_eq!(classify(&MapTable::identity(&s)).verdict.name(), "additive-standard");
        let target = MaximalSet::standard(&space(4, 2, 2), Kind::Row, 0);
        let col = make_colouring(&s, &target, None).unwrap();
        assert_eq!(classify(&col).verdict.name(), "colouring");
        let c = MapTable::constant(&s, &s, &s.zero());
        assert_eq!(classify(&c).verdict.name(), "not-graph-hom");
    }

    #[test]
    fn monotonicity() {
        let s = space(2, 2, 2);
        assert!(check_order_monotonicity(&MapTable::identity(&s), DEFAULT_STATE_CAP, 0)
            .unwrap()
            .is_empty());
        let tau = embedding(2, 4);
        let src = MatrixSpace::new(tau.src(), 2, 2);
        let dst = MatrixSpace::new(tau.dst(), 2, 2);
        let k = tau.dst().clone();
        let l = Mat::unit(&k, 2, 2, 0, 0).scale(2);
        let form = CanonicalForm::semrl(&src, &dst, Mat::identity(&k, 2), Mat::identity(&k, 2), tau, l, false).unwrap();
        let t = form.tabulate(DEFAULT_STATE_CAP).unwrap();
        assert!(check_order_monotonicity(&t, DEFAULT_STATE_CAP, 0).unwrap().is_empty());
        assert!(contraction_violations(&t).is_empty());
    }
}
