//! Maximal adjacent sets, lines, balls and the matrix graph itself.
//!
//! A row-type maximal set is `{c x + A0 : x a 1 x n row}` for a fixed nonzero
//! column `c`; a column-type set is `{y r + A0 : y an m x 1 column}` for a
//! fixed nonzero row `r`. Directions are projectively normalised and the
//! offset has its pivot row (resp. column) zeroed, so structural equality of
//! [`MaximalSet`] values is set equality.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::fields::{Elem, Field};
use crate::matrices::{normalize, projective_points, Mat, MatError, MatrixSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("matrices are not adjacent")]
    NotAdjacent,
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("not an adjacent set containing 0: {0}")]
    NotAdjacentSet(String),
    #[error("{0} is not a point of the maximal set")]
    NotMember(String),
    #[error("a line needs two distinct points")]
    DegenerateLine,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error(transparent)]
    Mat(#[from] MatError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Row,
    Col,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Row => "row",
            Kind::Col => "col",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaximalSet {
    kind: Kind,
    direction: Vec<Elem>,
    offset: Mat,
}

fn pivot(v: &[Elem]) -> usize {
    v.iter().position(|&x| x != 0).expect("nonzero direction")
}

impl MaximalSet {
    /// The row-type set with direction `c` passing through `through`.
    pub fn row(c: &[Elem], through: &Mat) -> Result<MaximalSet, GeometryError> {
        let f = through.field();
        if c.len() != through.rows() {
            return Err(MatError::ShapeMismatch(c.len(), 1, through.rows(), through.cols()).into());
        }
        let mut c = c.to_vec();
        normalize(f, &mut c).ok_or(GeometryError::ZeroDirection)?;
        let p = pivot(&c);
        let offset = through.sub(&Mat::outer(f, &c, &through.row(p)));
        Ok(MaximalSet {
            kind: Kind::Row,
            direction: c,
            offset,
        })
    }

    /// The column-type set with direction `r` passing through `through`.
    pub fn col(r: &[Elem], through: &Mat) -> Result<MaximalSet, GeometryError> {
        let f = through.field();
        if r.len() != through.cols() {
            return Err(MatError::ShapeMismatch(1, r.len(), through.rows(), through.cols()).into());
        }
        let mut r = r.to_vec();
        normalize(f, &mut r).ok_or(GeometryError::ZeroDirection)?;
        let p = pivot(&r);
        let offset = through.sub(&Mat::outer(f, &through.col(p), &r));
        Ok(MaximalSet {
            kind: Kind::Col,
            direction: r,
            offset,
        })
    }

    /// `M_i` (row `i` free) or `N_j` (column `j` free) through the origin.
    pub fn standard(space: &MatrixSpace, kind: Kind, index: usize) -> MaximalSet {
        let zero = space.zero();
        match kind {
            Kind::Row => {
                let mut c = vec![0; space.rows()];
                c[index] = 1;
                MaximalSet::row(&c, &zero).unwrap()
            }
            Kind::Col => {
                let mut r = vec![0; space.cols()];
                r[index] = 1;
                MaximalSet::col(&r, &zero).unwrap()
            }
        }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn direction(&self) -> &[Elem] {
        &self.direction
    }

    pub fn offset(&self) -> &Mat {
        &self.offset
    }

    pub fn field(&self) -> &Field {
        self.offset.field()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.offset.shape()
    }

    pub fn space(&self) -> MatrixSpace {
        MatrixSpace::new(self.field(), self.offset.rows(), self.offset.cols())
    }

    /// Length of the free parameter vector.
    pub fn param_len(&self) -> usize {
        match self.kind {
            Kind::Row => self.offset.cols(),
            Kind::Col => self.offset.rows(),
        }
    }

    pub fn cardinality(&self) -> usize {
        self.field().order().pow(self.param_len() as u32)
    }

    /// The point with parameter vector `x`.
    pub fn point(&self, x: &[Elem]) -> Mat {
        let f = self.field();
        let d = match self.kind {
            Kind::Row => Mat::outer(f, &self.direction, x),
            Kind::Col => Mat::outer(f, x, &self.direction),
        };
        self.offset.add(&d)
    }

    /// Parameter vector of a member; `None` for non-members.
    pub fn param(&self, x: &Mat) -> Option<Vec<Elem>> {
        if x.field() != self.field() || x.shape() != self.shape() {
            return None;
        }
        let d = x.sub(&self.offset);
        let f = self.field();
        let p = pivot(&self.direction);
        let v = match self.kind {
            Kind::Row => d.row(p),
            Kind::Col => d.col(p),
        };
        let rebuilt = match self.kind {
            Kind::Row => Mat::outer(f, &self.direction, &v),
            Kind::Col => Mat::outer(f, &v, &self.direction),
        };
        (rebuilt == d).then_some(v)
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.param(x).is_some()
    }

    pub fn try_contains(&self, x: &Mat) -> Result<bool, GeometryError> {
        self.space().check(x)?;
        Ok(self.contains(x))
    }

    /// Every point, sorted by encoding.
    pub fn points(&self) -> Vec<Mat> {
        let space = self.space();
        let f = self.field();
        let len = self.param_len();
        let q = f.order();
        let mut out: Vec<Mat> = (0..q.pow(len as u32))
            .map(|mut idx| {
                let x: Vec<Elem> = (0..len)
                    .map(|_| {
                        let d = (idx % q) as Elem;
                        idx /= q;
                        d
                    })
                    .collect();
                self.point(&x)
            })
            .collect();
        out.sort_by_key(|m| space.encode(m));
        out
    }

    pub fn describe(&self) -> String {
        let dir: Vec<String> = self.direction.iter().map(|d| d.to_string()).collect();
        format!("{} dir={} offset={}", self.kind.name(), dir.join(","), self.offset)
    }
}

/// A `q`-point line inside a maximal set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    carrier: MaximalSet,
    points: Vec<Mat>,
}

impl Line {
    pub fn carrier(&self) -> &MaximalSet {
        &self.carrier
    }

    pub fn points(&self) -> &[Mat] {
        &self.points
    }

    pub fn contains(&self, x: &Mat) -> bool {
        self.points.contains(x)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All maximal sets through `x`: row types first, then column types, each in
/// direction order.
pub fn maximal_sets_through(x: &Mat) -> Vec<MaximalSet> {
    let f = x.field();
    let mut out = Vec::new();
    for c in projective_points(f, x.rows()) {
        out.push(MaximalSet::row(&c, x).unwrap());
    }
    for r in projective_points(f, x.cols()) {
        out.push(MaximalSet::col(&r, x).unwrap());
    }
    out
}

/// Every maximal set of `space`, row types first, each kind sorted by
/// direction and then by offset encoding.
pub fn all_maximal_sets(space: &MatrixSpace) -> Vec<MaximalSet> {
    let mut seen = std::collections::HashSet::new();
    let mut out: Vec<MaximalSet> = space
        .iter()
        .flat_map(|x| maximal_sets_through(&x))
        .filter(|m| seen.insert(m.clone()))
        .collect();
    out.sort_by(|a, b| {
        (a.kind(), a.direction(), space.encode(a.offset())).cmp(&(b.kind(), b.direction(), space.encode(b.offset())))
    });
    out
}

/// The row-type and the column-type maximal set containing an edge.
pub fn maximal_sets_containing_pair(a: &Mat, b: &Mat) -> Result<(MaximalSet, MaximalSet), GeometryError> {
    let d = b.try_sub(a)?;
    if d.rank() != 1 {
        return Err(GeometryError::NotAdjacent);
    }
    let j = (0..d.cols()).find(|&j| d.col(j).iter().any(|&e| e != 0)).unwrap();
    let i = (0..d.rows()).find(|&i| d.row(i).iter().any(|&e| e != 0)).unwrap();
    Ok((MaximalSet::row(&d.col(j), a)?, MaximalSet::col(&d.row(i), a)?))
}

/// Points common to two maximal sets of the same ambient space, sorted by encoding.
pub fn intersect(m: &MaximalSet, n: &MaximalSet) -> Result<Vec<Mat>, GeometryError> {
    if m.field() != n.field() {
        return Err(MatError::FieldMismatch.into());
    }
    if m.shape() != n.shape() {
        let (a, b) = m.shape();
        let (c, d) = n.shape();
        return Err(MatError::ShapeMismatch(a, b, c, d).into());
    }
    Ok(m.points().into_iter().filter(|x| n.contains(x)).collect())
}

/// The line `{t (y - x) + x}` of `m` through two of its points.
pub fn line_through(m: &MaximalSet, x: &Mat, y: &Mat) -> Result<Line, GeometryError> {
    for p in [x, y] {
        if !m.try_contains(p)? {
            return Err(GeometryError::NotMember(p.to_string()));
        }
    }
    if x == y {
        return Err(GeometryError::DegenerateLine);
    }
    let f = x.field();
    let d = y.sub(x);
    let space = m.space();
    let mut points: Vec<Mat> = f.elements().map(|t| d.scale(t).add(x)).collect();
    points.sort_by_key(|p| space.encode(p));
    Ok(Line {
        carrier: m.clone(),
        points,
    })
}

/// Decides `x ∈ m` from adjacency with three noncollinear points of `m`.
pub fn membership_by_three_points(
    x: &Mat,
    p1: &Mat,
    p2: &Mat,
    p3: &Mat,
    m: &MaximalSet,
) -> Result<bool, GeometryError> {
    m.space().check(x)?;
    for p in [p1, p2, p3] {
        if !m.try_contains(p)? {
            return Err(GeometryError::InvalidWitness(format!("{p} is not in the set")));
        }
    }
    let line = line_through(m, p1, p2).map_err(|_| GeometryError::InvalidWitness("repeated witness".into()))?;
    if line.contains(p3) {
        return Err(GeometryError::InvalidWitness("witnesses are collinear".into()));
    }
    let ws = [p1, p2, p3];
    if ws.contains(&x) {
        return Ok(true);
    }
    Ok(ws.iter().all(|p| x.sub(p).rank() == 1))
}

/// Dimension of an adjacent set containing 0: the rank of its parameter
/// vectors inside a maximal set that contains it.
pub fn adjacent_set_dim(s: &[Mat]) -> Result<usize, GeometryError> {
    let first = s.first().ok_or_else(|| GeometryError::NotAdjacentSet("empty".into()))?;
    let zero = Mat::zeros(first.field(), first.rows(), first.cols());
    if !s.contains(&zero) {
        return Err(GeometryError::NotAdjacentSet("0 is missing".into()));
    }
    for (i, a) in s.iter().enumerate() {
        for b in &s[i + 1..] {
            if a != b && a.try_sub(b)?.rank() != 1 {
                return Err(GeometryError::NotAdjacentSet(format!("{a} and {b} are not adjacent")));
            }
        }
    }
    let Some(y) = s.iter().find(|a| !a.is_zero()) else {
        return Err(GeometryError::NotAdjacentSet("fewer than two points".into()));
    };
    let (row, col) = maximal_sets_containing_pair(&zero, y)?;
    let carrier = [row, col]
        .into_iter()
        .find(|m| s.iter().all(|a| m.contains(a)))
        .ok_or_else(|| GeometryError::NotAdjacentSet("no maximal set contains it".into()))?;
    let params: Vec<Elem> = s.iter().flat_map(|a| carrier.param(a).unwrap()).collect();
    let stacked = Mat::from_vec(first.field(), s.len(), carrier.param_len(), params)?;
    Ok(stacked.rank())
}

/// `{X : rank(X - a) <= 1}`, sorted by encoding.
pub fn ball(a: &Mat) -> Vec<Mat> {
    let space = MatrixSpace::new(a.field(), a.rows(), a.cols());
    let mut out: Vec<Mat> = std::iter::once(a.clone())
        .chain(space.rank_one().iter().map(|r| r.add(a)))
        .collect();
    out.sort_by_key(|m| space.encode(m));
    out
}

/// `{X : rank(X - a) = 1}`, sorted by encoding.
pub fn neighborhood(a: &Mat) -> Vec<Mat> {
    ball(a).into_iter().filter(|x| x != a).collect()
}

/// The graph on a whole matrix space, vertices numbered by encoding.
#[derive(Clone, Debug)]
pub struct MatrixGraph {
    space: MatrixSpace,
    adjacency: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    EdgeList,
}

impl MatrixGraph {
    pub fn new(space: &MatrixSpace, cap: u64) -> Result<MatrixGraph, GeometryError> {
        let n = space.ensure_within(cap)?;
        let offsets = space.rank_one();
        let adjacency = (0..n)
            .map(|v| {
                let a = space.decode(v);
                let mut nb: Vec<u32> = offsets.iter().map(|r| space.encode(&a.add(r)) as u32).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Ok(MatrixGraph {
            space: space.clone(),
            adjacency,
        })
    }

    pub fn space(&self) -> &MatrixSpace {
        &self.space
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adjacency[v]
    }

    pub fn is_regular(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|nb| nb.len() == d).then_some(d)
    }

    /// Shortest-path distances from `src` to every vertex (`usize::MAX` if unreachable).
    pub fn bfs_from(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                let w = w as usize;
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn bfs_distance(&self, a: &Mat, b: &Mat) -> Result<usize, GeometryError> {
        self.space.check(a)?;
        self.space.check(b)?;
        Ok(self.bfs_from(self.space.encode(a))[self.space.encode(b)])
    }

    pub fn export(&self, format: ExportFormat) -> String {
        let mut out = String::new();
        match format {
            ExportFormat::Dot => {
                out.push_str("graph matrices {\n");
                for v in 0..self.vertex_count() {
                    writeln!(out, "  {v} [label=\"{}\"];", self.space.decode(v)).unwrap();
                }
                for (v, w) in self.edges() {
                    writeln!(out, "  {v} -- {w};").unwrap();
                }
                out.push_str("}\n");
            }
            ExportFormat::EdgeList => {
                for (v, w) in self.edges() {
                    writeln!(out, "{v} {w}").unwrap();
                }
            }
        }
        out
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(v, nb)| {
            nb.iter()
                .map(|&w| w as usize)
                .filter(move |&w| w > v)
                .map(move |w| (v, w))
        })
    }
}

pub fn bfs_distance(a: &Mat, b: &Mat, cap: u64) -> Result<usize, GeometryError> {
    let space = MatrixSpace::new(a.field(), a.rows(), a.cols());
    MatrixGraph::new(&space, cap)?.bfs_distance(a, b)
}

pub fn graph_export(
    field: &Field,
    m: usize,
    n: usize,
    format: ExportFormat,
    cap: u64,
) -> Result<String, GeometryError> {
    let space = MatrixSpace::new(field, m, n);
    Ok(MatrixGraph::new(&space, cap)?.export(format))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::DEFAULT_STATE_CAP;

    fn space(q: u64, m: usize, n: usize) -> MatrixSpace {
        MatrixSpace::new(&Field::standard(q).unwrap(), m, n)
    }

    /// Maximal cliques through `x`, found by greedy extension of every
    /// neighbour in encoding order and deduplicated.
    fn cliques_through(s: &MatrixSpace, x: &Mat) -> Vec<Vec<usize>> {
        let all: Vec<Mat> = s.iter().collect();
        let mut found: Vec<Vec<usize>> = Vec::new();
        for y in neighborhood(x) {
            for z in neighborhood(x) {
                if z == y || z.sub(&y).rank() != 1 {
                    continue;
                }
                let mut clique = vec![x.clone(), y.clone(), z];
                for w in &all {
                    if clique.iter().all(|c| c == w || c.sub(w).rank() == 1) && !clique.contains(w) {
                        clique.push(w.clone());
                    }
                }
                let mut codes: Vec<usize> = clique.iter().map(|c| s.encode(c)).collect();
                codes.sort_unstable();
                if !found.contains(&codes) {
                    found.push(codes);
                }
            }
        }
        found
    }

    #[test]
    fn standard_sets() {
        let s = space(3, 2, 2);
        let m1 = MaximalSet::standard(&s, Kind::Row, 0);
        let f = s.field().clone();
        for x in f.elements() {
            assert!(m1.contains(&s.unit(0, 0).scale(x)));
        }
        assert!(!m1.contains(&s.unit(1, 0)));
        assert_eq!(m1.cardinality(), 9);
        assert_eq!(m1.points().len(), 9);
    }

    #[test]
    fn sets_through_a_point() {
        assert_eq!(maximal_sets_through(&space(2, 2, 2).zero()).len(), 6);
        assert_eq!(maximal_sets_through(&space(3, 2, 2).zero()).len(), 8);
        let s = space(2, 2, 3);
        let x = s.decode(37);
        let sets = maximal_sets_through(&x);
        assert_eq!(sets.len(), 3 + 7);
        assert!(sets.iter().all(|m| m.contains(&x)));
    }

    #[test]
    fn sets_agree_with_clique_extension() {
        for (q, m, n) in [(2, 2, 2), (2, 2, 3)] {
            let s = space(q, m, n);
            for x in [s.zero(), s.decode(5)] {
                let mut ours: Vec<Vec<usize>> = maximal_sets_through(&x)
                    .iter()
                    .map(|ms| ms.points().iter().map(|p| s.encode(p)).collect())
                    .collect();
                let mut theirs = cliques_through(&s, &x);
                ours.sort();
                theirs.sort();
                assert_eq!(ours, theirs);
            }
        }
    }

    #[test]
    fn contains_matches_clique_membership() {
        let s = space(2, 2, 2);
        let cliques = cliques_through(&s, &s.zero());
        for ms in maximal_sets_through(&s.zero()) {
            let codes: Vec<usize> = ms.points().iter().map(|p| s.encode(p)).collect();
            assert!(cliques.contains(&codes));
            for x in s.iter() {
                assert_eq!(ms.contains(&x), codes.contains(&s.encode(&x)));
            }
        }
    }

    #[test]
    fn pair_sets() {
        let s = space(2, 2, 2);
        let (m, n) = maximal_sets_containing_pair(&s.zero(), &s.unit(0, 0)).unwrap();
        assert_eq!(m, MaximalSet::standard(&s, Kind::Row, 0));
        assert_eq!(n, MaximalSet::standard(&s, Kind::Col, 0));
        assert_eq!(
            maximal_sets_containing_pair(&s.zero(), &s.diag_ones(2)),
            Err(GeometryError::NotAdjacent)
        );
        for a in s.iter() {
            for b in neighborhood(&a) {
                let through: Vec<_> = maximal_sets_through(&a)
                    .into_iter()
                    .filter(|m| m.contains(&b))
                    .collect();
                assert_eq!(through.len(), 2);
                let (m, n) = maximal_sets_containing_pair(&a, &b).unwrap();
                assert_eq!(through, vec![m, n]);
            }
        }
    }

    #[test]
    fn intersections() {
        let s = space(3, 2, 2);
        let m1 = MaximalSet::standard(&s, Kind::Row, 0);
        let m2 = MaximalSet::standard(&s, Kind::Row, 1);
        let n1 = MaximalSet::standard(&s, Kind::Col, 0);
        let line: Vec<Mat> = {
            let mut v: Vec<Mat> = s.field().elements().map(|x| s.unit(0, 0).scale(x)).collect();
            v.sort_by_key(|m| s.encode(m));
            v
        };
        assert_eq!(intersect(&m1, &n1).unwrap(), line);
        assert_eq!(intersect(&m1, &m2).unwrap(), vec![s.zero()]);
        let all: Vec<MaximalSet> = [s.zero(), s.decode(40)].iter().flat_map(maximal_sets_through).collect();
        for a in &all {
            for b in &all {
                let k = intersect(a, b).unwrap().len();
                if a == b {
                    assert_eq!(k, 9);
                } else if a.kind() == b.kind() {
                    assert!(k <= 1);
                } else {
                    assert!(k == 0 || k == 3);
                }
            }
        }
    }

    #[test]
    fn lines() {
        let s = space(3, 2, 2);
        let m1 = MaximalSet::standard(&s, Kind::Row, 0);
        let l = line_through(&m1, &s.zero(), &s.unit(0, 0)).unwrap();
        assert_eq!(l.len(), 3);
        assert!(l.points().iter().all(|p| m1.contains(p)));
        let n1 = MaximalSet::standard(&s, Kind::Col, 0);
        let l2 = line_through(&n1, &s.unit(1, 0), &s.unit(0, 0)).unwrap();
        assert!(l2.points().iter().all(|p| n1.contains(p)));
        assert_eq!(
            line_through(&m1, &s.zero(), &s.zero()),
            Err(GeometryError::DegenerateLine)
        );
        assert!(line_through(&m1, &s.zero(), &s.unit(1, 0)).is_err());
    }

    #[test]
    fn three_point_membership() {
        let s = space(2, 2, 2);
        let m1 = MaximalSet::standard(&s, Kind::Row, 0);
        let (p1, p2, p3) = (s.zero(), s.unit(0, 0), s.unit(0, 1));
        assert!(!membership_by_three_points(&s.diag_ones(2), &p1, &p2, &p3, &m1).unwrap());
        assert!(membership_by_three_points(&p2.add(&p3), &p1, &p2, &p3, &m1).unwrap());
        let p4 = p2.add(&p3);
        assert!(membership_by_three_points(&p1, &p2, &p3, &p4, &m1).unwrap());
        let s3 = space(3, 2, 2);
        let m = MaximalSet::standard(&s3, Kind::Row, 0);
        let t = s3.unit(0, 0).scale(2);
        assert!(matches!(
            membership_by_three_points(&s3.zero(), &s3.zero(), &s3.unit(0, 0), &t, &m),
            Err(GeometryError::InvalidWitness(_))
        ));
    }

    #[test]
    fn dimensions() {
        let s = space(2, 2, 3);
        let z = s.zero();
        assert_eq!(adjacent_set_dim(&[z.clone(), s.unit(0, 0)]).unwrap(), 1);
        let m1 = MaximalSet::standard(&s, Kind::Row, 0);
        assert_eq!(adjacent_set_dim(&m1.points()).unwrap(), 3);
        let e = s.unit(0, 0).add(&s.unit(0, 1));
        assert_eq!(adjacent_set_dim(&[z.clone(), s.unit(0, 0), e]).unwrap(), 2);
        assert!(adjacent_set_dim(&[s.unit(0, 0)]).is_err());
        assert!(adjacent_set_dim(&[z, s.diag_ones(2)]).is_err());
    }

    #[test]
    fn balls() {
        let s = space(2, 2, 2);
        assert_eq!(ball(&s.zero()).len(), 10);
        let a = s.decode(11);
        assert!(ball(&a).contains(&a));
        assert!(!neighborhood(&a).contains(&a));
        let mut shifted: Vec<Mat> = ball(&s.zero()).iter().map(|x| x.add(&a)).collect();
        shifted.sort_by_key(|m| s.encode(m));
        assert_eq!(shifted, ball(&a));
    }

    #[test]
    fn graph_and_bfs() {
        let s = space(2, 2, 2);
        let g = MatrixGraph::new(&s, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.edge_count(), 72);
        assert_eq!(g.is_regular(), Some(9));
        assert_eq!(g.bfs_distance(&s.zero(), &s.diag_ones(2)).unwrap(), 2);
        assert_eq!(g.bfs_distance(&s.zero(), &s.zero()).unwrap(), 0);
        for (q, m, n) in [(2, 2, 2), (3, 2, 2), (2, 2, 3)] {
            let s = space(q, m, n);
            let g = MatrixGraph::new(&s, DEFAULT_STATE_CAP).unwrap();
            for a in 0..g.vertex_count() {
                let d = g.bfs_from(a);
                let am = s.decode(a);
                for (b, &db) in d.iter().enumerate() {
                    assert_eq!(db, am.sub(&s.decode(b)).rank());
                }
            }
        }
    }

    #[test]
    fn export_is_deterministic() {
        let f = Field::standard(2).unwrap();
        let dot = graph_export(&f, 2, 2, ExportFormat::Dot, DEFAULT_STATE_CAP).unwrap();
        assert!(dot.contains("0 [label=\"0,0,0,0\"];"));
        assert_eq!(
            dot,
            graph_export(&f, 2, 2, ExportFormat::Dot, DEFAULT_STATE_CAP).unwrap()
        );
        let edges = graph_export(&f, 2, 2, ExportFormat::EdgeList, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(edges.lines().count(), 72);
        assert!(graph_export(&f, 4, 4, ExportFormat::EdgeList, 1000).is_err());
    }
}
