//! Machine checks of the structural and classification results, each
//! producing a line-oriented report.
//!
//! A report line reads `<id> <pass|fail> <checked> <violations>`, followed by
//! indented `regime`, `mode`, `note` and `witness` lines.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canon::{make_colouring, valid_ls, CanonicalForm};
use crate::classify::{
    check_order_monotonicity, contraction_violations, image_is_adjacent_set, is_degenerate, is_distance_preserving,
    is_graph_hom, range_decomposition, recover_additive, recover_semrl, MapTable,
};
use crate::fields::{enumerate_field_homs, Elem, Field, FieldHom};
use crate::geometry::{
    adjacent_set_dim, all_maximal_sets, ball, line_through, maximal_sets_containing_pair, maximal_sets_through,
    membership_by_three_points, MatrixGraph, MaximalSet,
};
use crate::matrices::{all_g_inverses, minus_le, minus_le_with_ginverses, Mat, MatrixSpace, DEFAULT_STATE_CAP};
use crate::search::{draw_homs, sample_homs_with, search_hom, Constraints, SearchOutcome, SearchProblem};

/// Witnesses listed per report; `violations` still counts all of them.
pub const MAX_WITNESSES: usize = 5;
/// Regimes of the metric and clique-geometry checks as `(q, m, n)`.
pub const METRIC_REGIMES: [(u64, usize, usize); 3] = [(2, 2, 2), (3, 2, 2), (2, 2, 3)];
/// Field-homomorphism counts checked against the generator-image oracle.
pub const FIELD_HOM_EXPECTED: [(u64, u64, usize); 3] = [(2, 8, 1), (4, 16, 2), (4, 8, 0)];
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000_000;
/// Sampled homomorphisms below this count fail the degenerate-range report.
pub const SAMPLE_FLOOR: usize = 100;
/// Triples beyond this are sampled in the order-monotonicity check.
pub const TRIPLE_CAP: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive { universe: u64 },
    Sampled { seed: u64, size: usize },
    SearchUnsat { budget: u64 },
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exhaustive { universe } => write!(f, "exhaustive universe={universe}"),
            Mode::Sampled { seed, size } => write!(f, "sampled seed={seed} size={size}"),
            Mode::SearchUnsat { budget } => write!(f, "search-unsat budget={budget}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub regime: String,
    pub mode: Mode,
    pub checked: u64,
    pub violations: u64,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(id: &str, regime: impl Into<String>, mode: Mode) -> Self {
        VerificationReport {
            theorem_id: id.into(),
            regime: regime.into(),
            mode,
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    fn fail(&mut self, witness: String) {
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.theorem_id,
            if self.passed() { "pass" } else { "fail" },
            self.checked,
            self.violations
        );
        writeln!(out, "  regime {}", self.regime).unwrap();
        writeln!(out, "  mode {}", self.mode).unwrap();
        for n in &self.notes {
            writeln!(out, "  note {n}").unwrap();
        }
        for w in &self.witnesses {
            writeln!(out, "  witness {w}").unwrap();
        }
        out
    }
}

pub fn render_reports(reports: &[VerificationReport]) -> String {
    reports.iter().map(VerificationReport::render).collect()
}

pub fn all_passed(reports: &[VerificationReport]) -> bool {
    reports.iter().all(VerificationReport::passed)
}

fn gf(q: u64) -> Field {
    Field::standard(q).expect("standard field")
}

fn space_name(s: &MatrixSpace) -> String {
    format!("GF({}) {}x{}", s.q(), s.rows(), s.cols())
}

fn map_name(src: &MatrixSpace, dst: &MatrixSpace) -> String {
    format!("{} -> {}", space_name(src), space_name(dst))
}

fn codes(t: &MapTable) -> String {
    t.codes().iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

// ---------------------------------------------------------------------------
// Metric and clique geometry

/// BFS distance against rank distance, the two-sets-per-edge law, maximal
/// set intersections, three-point membership and the rank-one support
/// dichotomy, exhaustively at each `(q, m, n)`.
pub fn verify_metric_and_structure(regimes: &[(u64, usize, usize)]) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for &(q, m, n) in regimes {
        let space = MatrixSpace::new(&gf(q), m, n);
        let name = space_name(&space);
        let size = space.size() as u64;
        let graph = MatrixGraph::new(&space, DEFAULT_STATE_CAP).expect("desk-scale graph");
        let pts: Vec<Mat> = space.iter().collect();

        let mut r = VerificationReport::new("metric-identity", &name, Mode::Exhaustive { universe: size * size });
        let rows: Vec<Vec<usize>> = (0..pts.len()).into_par_iter().map(|a| graph.bfs_from(a)).collect();
        for (a, dist) in rows.iter().enumerate() {
            for (b, &d) in dist.iter().enumerate() {
                let rank = pts[a].sub(&pts[b]).rank();
                r.check(d == rank, || format!("{} {} bfs={d} rank={rank}", pts[a], pts[b]));
            }
        }
        r.note(format!(
            "vertices={} edges={}",
            graph.vertex_count(),
            graph.edge_count()
        ));
        out.push(r);

        let mut r = VerificationReport::new(
            "edge-clique-law",
            &name,
            Mode::Exhaustive {
                universe: graph.edge_count() as u64,
            },
        );
        for (a, b) in graph.edges() {
            let sets: Vec<MaximalSet> = maximal_sets_through(&pts[a])
                .into_iter()
                .filter(|s| s.contains(&pts[b]))
                .collect();
            let ok = sets.len() == 2 && sets[0].kind() != sets[1].kind();
            r.check(ok, || {
                format!("{} {} lies in {} maximal sets", pts[a], pts[b], sets.len())
            });
        }
        out.push(r);

        let sets = all_maximal_sets(&space);
        let pairs = (sets.len() * (sets.len() - 1) / 2) as u64;
        let mut r = VerificationReport::new("clique-intersections", &name, Mode::Exhaustive { universe: pairs });
        let qn = space.q();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                let common: Vec<Mat> = a.points().into_iter().filter(|x| b.contains(x)).collect();
                let ok = if a.kind() == b.kind() {
                    common.len() <= 1
                } else if common.len() < 2 {
                    common.is_empty()
                } else {
                    // A nonempty different-type intersection is a line of q points.
                    common.len() == qn
                        && line_through(a, &common[0], &common[1]).map(|l| l.points() == common.as_slice()) == Ok(true)
                };
                r.check(ok, || {
                    format!("{} and {} meet in {} points", a.describe(), b.describe(), common.len())
                });
            }
        }
        r.note(format!("maximal sets={}", sets.len()));
        out.push(r);

        let mut r = VerificationReport::new(
            "three-point-membership",
            &name,
            Mode::Exhaustive {
                universe: sets.len() as u64 * size,
            },
        );
        for s in &sets {
            let p = s.points();
            let line = line_through(s, &p[0], &p[1]).expect("two points of the set");
            let p3 = p
                .iter()
                .find(|x| !line.contains(x))
                .expect("a set is not a line")
                .clone();
            for x in &pts {
                let by3 = membership_by_three_points(x, &p[0], &p[1], &p3, s).expect("points of the set");
                r.check(by3 == s.contains(x), || format!("{x} against {}", s.describe()));
            }
        }
        out.push(r);

        if m.min(n) >= 2 {
            out.push(rank_one_support(&space, &pts));
        }
    }
    out
}

/// If `A` is adjacent to two distinct multiples of `E_ij`, all rows but `i`
/// or all columns but `j` of `A` vanish.
fn rank_one_support(space: &MatrixSpace, pts: &[Mat]) -> VerificationReport {
    let f = space.field();
    let mut r = VerificationReport::new(
        "rank-one-support",
        space_name(space),
        Mode::Exhaustive {
            universe: (space.entries() * f.order() * (f.order() - 1) / 2) as u64 * space.size() as u64,
        },
    );
    let mut tested = 0u64;
    for i in 0..space.rows() {
        for j in 0..space.cols() {
            let e = space.unit(i, j);
            for b1 in f.elements() {
                for b2 in f.elements().filter(|&b| b > b1) {
                    let (x1, x2) = (e.scale(b1), e.scale(b2));
                    for a in pts {
                        if a.sub(&x1).rank() != 1 || a.sub(&x2).rank() != 1 {
                            continue;
                        }
                        tested += 1;
                        let rows_zero = (0..space.rows())
                            .filter(|&k| k != i)
                            .all(|k| a.row(k).iter().all(|&v| v == 0));
                        let cols_zero = (0..space.cols())
                            .filter(|&k| k != j)
                            .all(|k| a.col(k).iter().all(|&v| v == 0));
                        r.check(rows_zero || cols_zero, || format!("{a} adjacent to {x1} and {x2}"));
                    }
                }
            }
        }
    }
    r.note(format!("adjacent configurations={tested}"));
    r
}

// ---------------------------------------------------------------------------
// Minus order

/// Pairs `(P D_r Q, P D_t Q)` over all invertible `P`, `Q` and `r <= t`.
fn simultaneous_normal_form_pairs(space: &MatrixSpace) -> HashSet<(usize, usize)> {
    let f = space.field();
    let (m, n) = (space.rows(), space.cols());
    let ps = MatrixSpace::new(f, m, m)
        .invertibles(DEFAULT_STATE_CAP)
        .expect("small group");
    let qs = MatrixSpace::new(f, n, n)
        .invertibles(DEFAULT_STATE_CAP)
        .expect("small group");
    let k = m.min(n);
    let ds: Vec<Mat> = (0..=k).map(|r| space.diag_ones(r)).collect();
    ps.par_iter()
        .flat_map_iter(|p| {
            let ds = &ds;
            qs.iter().flat_map(move |q| {
                let imgs: Vec<usize> = ds.iter().map(|d| space.encode(&p.mul(d).mul(q))).collect();
                (0..=k).flat_map(move |r| {
                    let imgs = imgs.clone();
                    (r..=k).map(move |t| (imgs[r], imgs[t]))
                })
            })
        })
        .collect()
}

/// The rank characterisation of the minus order against the g-inverse and
/// simultaneous-normal-form characterisations, and the idempotent criterion.
pub fn verify_minus_order() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for q in [2, 3] {
        let space = MatrixSpace::new(&gf(q), 2, 2);
        let name = space_name(&space);
        let pts: Vec<Mat> = space.iter().collect();
        let n = pts.len() as u64;
        let nf = simultaneous_normal_form_pairs(&space);
        let ginv: Vec<Vec<Mat>> = pts
            .par_iter()
            .map(|a| all_g_inverses(a, DEFAULT_STATE_CAP).expect("small space"))
            .collect();
        let mut r = VerificationReport::new(
            "minus-order-characterisations",
            &name,
            Mode::Exhaustive { universe: n * n },
        );
        let mut below = 0u64;
        for (i, a) in pts.iter().enumerate() {
            for (j, b) in pts.iter().enumerate() {
                let by_rank = minus_le(a, b).unwrap();
                let by_ginv = minus_le_with_ginverses(a, b, &ginv[i]);
                let by_nf = nf.contains(&(i, j));
                below += by_rank as u64;
                r.check(by_rank == by_ginv && by_rank == by_nf, || {
                    format!("{a} <= {b}: rank={by_rank} g-inverse={by_ginv} normal-form={by_nf}")
                });
            }
        }
        r.note(format!("related pairs={below}"));
        out.push(r);

        let idem: Vec<&Mat> = pts.iter().filter(|b| &b.mul(b) == *b).collect();
        let mut r = VerificationReport::new(
            "minus-order-idempotents",
            &name,
            Mode::Exhaustive {
                universe: idem.len() as u64 * n,
            },
        );
        for b in &idem {
            for a in &pts {
                let lhs = minus_le(a, b).unwrap();
                let rhs = &a.mul(a) == a && &a.mul(b) == a && &b.mul(a) == a;
                r.check(lhs == rhs, || {
                    format!("{a} against idempotent {b}: order={lhs} algebraic={rhs}")
                });
            }
        }
        r.note(format!("idempotents={}", idem.len()));
        out.push(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Field homomorphisms

/// Counts maps fixed by the image of the polynomial generator that respect
/// addition, multiplication and 1, checking all pairs.
pub fn count_homs_by_generator(src: &Field, dst: &Field) -> usize {
    let p = src.characteristic();
    let gen: Elem = if src.degree() == 1 { 1 } else { p as Elem };
    dst.elements()
        .filter(|&y| {
            if src.degree() == 1 && y != dst.one() {
                return false;
            }
            let image = |x: Elem| -> Elem {
                let mut acc = dst.zero();
                let mut pw = dst.one();
                for c in src.coeffs(x) {
                    let mut term = dst.zero();
                    for _ in 0..c {
                        term = dst.add(term, pw);
                    }
                    acc = dst.add(acc, term);
                    pw = dst.mul(pw, y);
                }
                acc
            };
            debug_assert!(src.degree() == 1 || src.coeffs(gen)[1] == 1);
            image(src.one()) == dst.one()
                && src.elements().all(|a| {
                    src.elements().all(|b| {
                        image(src.add(a, b)) == dst.add(image(a), image(b))
                            && image(src.mul(a, b)) == dst.mul(image(a), image(b))
                    })
                })
        })
        .count()
}

pub fn verify_field_homs() -> Vec<VerificationReport> {
    let mut r = VerificationReport::new(
        "field-hom-counts",
        "GF(2)->GF(8), GF(4)->GF(16), GF(4)->GF(8)",
        Mode::Exhaustive {
            universe: FIELD_HOM_EXPECTED.len() as u64,
        },
    );
    for (a, b, expected) in FIELD_HOM_EXPECTED {
        let (fa, fb) = (gf(a), gf(b));
        let enumerated = enumerate_field_homs(&fa, &fb).len();
        let oracle = count_homs_by_generator(&fa, &fb);
        r.note(format!(
            "GF({a})->GF({b}) enumerated={enumerated} oracle={oracle} expected={expected}"
        ));
        r.check(enumerated == oracle && oracle == expected, || {
            format!("GF({a})->GF({b}) enumerated={enumerated} oracle={oracle} expected={expected}")
        });
    }
    vec![r]
}

// ---------------------------------------------------------------------------
// Additive maps over GF(2)

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AdditiveCounts {
    pub maps: u64,
    pub homs: u64,
    pub colourings: u64,
    pub standard: u64,
    pub transpose: u64,
    pub degenerate: u64,
}

impl AdditiveCounts {
    /// `key value` lines, the fixture format.
    pub fn to_text(&self) -> String {
        format!(
            "maps {}\nhoms {}\ncolourings {}\nstandard {}\ntranspose {}\ndegenerate {}\n",
            self.maps, self.homs, self.colourings, self.standard, self.transpose, self.degenerate
        )
    }

    pub fn parse(text: &str) -> Option<AdditiveCounts> {
        let mut c = AdditiveCounts::default();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (k, v) = line.split_once(' ')?;
            let v: u64 = v.trim().parse().ok()?;
            match k {
                "maps" => c.maps = v,
                "homs" => c.homs = v,
                "colourings" => c.colourings = v,
                "standard" => c.standard = v,
                "transpose" => c.transpose = v,
                "degenerate" => c.degenerate = v,
                _ => return None,
            }
        }
        Some(c)
    }
}

enum AdditiveOutcome {
    NotHom,
    Colouring { degenerate: bool },
    Form { transpose: bool, degenerate: bool },
    Unexplained { degenerate: bool },
}

/// Every prime-field-linear map `GF(2)^{2x2} -> GF(2)^{2x2}`, given by the
/// images of the four matrix units; each homomorphism must be a colouring or
/// be recovered exactly as a standard or transposed additive form, and each
/// degenerate one must be a colouring.
pub fn verify_additive_classification() -> (Vec<VerificationReport>, AdditiveCounts) {
    let space = MatrixSpace::new(&gf(2), 2, 2);
    let name = map_name(&space, &space);
    let graph = MatrixGraph::new(&space, DEFAULT_STATE_CAP).unwrap();
    let units: Vec<Mat> = (0..4).map(|k| space.unit(k / 2, k % 2)).collect();
    let pts: Vec<Mat> = space.iter().collect();
    let total: usize = 1 << 16;
    let outcomes: Vec<AdditiveOutcome> = (0..total)
        .into_par_iter()
        .map(|i| {
            let imgs: Vec<Mat> = (0..4).map(|k| space.decode((i >> (4 * k)) & 15)).collect();
            let table: Vec<Mat> = pts
                .iter()
                .map(|x| {
                    let mut y = space.zero();
                    for (k, u) in units.iter().enumerate() {
                        if x.get(k / 2, k % 2) != 0 {
                            y = y.add(&imgs[k]);
                        }
                        debug_assert_eq!(u.get(k / 2, k % 2), 1);
                    }
                    y
                })
                .collect();
            let t = MapTable::new(&space, &space, table).unwrap();
            if crate::classify::is_graph_hom_on(&t, &graph).is_err() {
                return AdditiveOutcome::NotHom;
            }
            let degenerate = is_degenerate(&t).is_some();
            if image_is_adjacent_set(&t) {
                return AdditiveOutcome::Colouring { degenerate };
            }
            match recover_additive(&t) {
                Some(form) if form.tabulate(DEFAULT_STATE_CAP).ok().as_ref() == Some(&t) => AdditiveOutcome::Form {
                    transpose: form.variant().is_transpose(),
                    degenerate,
                },
                _ => AdditiveOutcome::Unexplained { degenerate },
            }
        })
        .collect();

    let mut counts = AdditiveCounts {
        maps: total as u64,
        ..Default::default()
    };
    let mut cls = VerificationReport::new(
        "additive-classification",
        &name,
        Mode::Exhaustive { universe: total as u64 },
    );
    let mut deg = VerificationReport::new(
        "degenerate-additive-colouring",
        &name,
        Mode::Exhaustive { universe: total as u64 },
    );
    for (i, o) in outcomes.iter().enumerate() {
        let witness = || {
            let imgs: Vec<String> = (0..4).map(|k| space.decode((i >> (4 * k)) & 15).to_string()).collect();
            format!("E11,E12,E21,E22 -> {}", imgs.join(" "))
        };
        let d = match o {
            AdditiveOutcome::NotHom => continue,
            AdditiveOutcome::Colouring { degenerate } => {
                counts.colourings += 1;
                *degenerate
            }
            AdditiveOutcome::Form { transpose, degenerate } => {
                if *transpose {
                    counts.transpose += 1;
                } else {
                    counts.standard += 1;
                }
                *degenerate
            }
            AdditiveOutcome::Unexplained { degenerate } => {
                cls.fail(witness());
                *degenerate
            }
        };
        counts.homs += 1;
        cls.checked += 1;
        deg.checked += 1;
        if d {
            counts.degenerate += 1;
            if !matches!(o, AdditiveOutcome::Colouring { .. }) {
                deg.fail(witness());
            }
        }
    }
    let split = format!(
        "homs={} colourings={} standard={} transpose={} degenerate={}",
        counts.homs, counts.colourings, counts.standard, counts.transpose, counts.degenerate
    );
    cls.note(format!("maps={total} {split}"));
    let id = MapTable::identity(&space);
    let id_ok = recover_additive(&id).is_some_and(|f| !f.variant().is_transpose());
    cls.check(id_ok, || "identity is not recovered as a standard form".into());
    deg.note(split);
    (vec![cls, deg], counts)
}

// ---------------------------------------------------------------------------
// Šemrl forms

fn fixed_invertible(f: &Field, n: usize, salt: u64) -> Mat {
    let mut rng = ChaCha8Rng::seed_from_u64(salt);
    random_invertible(f, n, &mut rng)
}

fn random_invertible(f: &Field, n: usize, rng: &mut ChaCha8Rng) -> Mat {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.order()) as Elem).collect();
        let m = Mat::from_vec(f, n, n, data).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

/// Every Šemrl-type form over a valid `L` for the given embedding, with two
/// choices of `P`, `Q` and both shifts.
fn semrl_forms(tau: &FieldHom, dst_m: usize, dst_n: usize, ls: &[Mat]) -> Vec<CanonicalForm> {
    let src = MatrixSpace::new(tau.src(), 2, 2);
    let dst = MatrixSpace::new(tau.dst(), dst_m, dst_n);
    let k = tau.dst();
    let pqs = [
        (Mat::identity(k, dst_m), Mat::identity(k, dst_n)),
        (fixed_invertible(k, dst_m, 11), fixed_invertible(k, dst_n, 13)),
    ];
    let mut out = Vec::new();
    for l in ls {
        for (p, q) in &pqs {
            for transpose in [false, true] {
                out.push(
                    CanonicalForm::semrl(&src, &dst, p.clone(), q.clone(), tau.clone(), l.clone(), transpose).unwrap(),
                );
                out.push(
                    CanonicalForm::shifted_semrl(
                        &src,
                        &dst,
                        p.clone(),
                        q.clone(),
                        tau.clone(),
                        l.clone(),
                        src.unit(0, 1),
                        dst.unit(dst_m - 1, 0),
                        transpose,
                    )
                    .unwrap(),
                );
            }
        }
    }
    out
}

/// Valid `L` sets for surjective and embedding `τ`, and every resulting
/// form is a distance-preserving homomorphism that `recover_semrl` re-derives.
pub fn verify_semrl_theorem() -> Vec<VerificationReport> {
    let mut out = Vec::new();
    let mut r = VerificationReport::new(
        "semrl-valid-l-surjective",
        "GF(q) -> GF(q), q in {2,3,4}, n=2",
        Mode::Exhaustive { universe: 0 },
    );
    let mut universe = 0;
    for q in [2, 3, 4] {
        let f = gf(q);
        for tau in enumerate_field_homs(&f, &f) {
            let ls = valid_ls(&tau, 2, DEFAULT_STATE_CAP).unwrap();
            universe += q.pow(4);
            let label = crate::canon::hom_label(&tau);
            r.check(ls.len() == 1 && ls[0].is_zero(), || {
                format!("{label}: {} valid L", ls.len())
            });
        }
    }
    r.mode = Mode::Exhaustive { universe };
    out.push(r);

    let emb = enumerate_field_homs(&gf(2), &gf(4)).remove(0);
    let ls = valid_ls(&emb, 2, DEFAULT_STATE_CAP).unwrap();
    let mut r = VerificationReport::new(
        "semrl-valid-l-embedding",
        "GF(2) -> GF(4), n=2",
        Mode::Exhaustive { universe: 256 },
    );
    let k = emb.dst();
    let omega_e11 = Mat::unit(k, 2, 2, 0, 0).scale(2);
    r.check(ls.iter().any(Mat::is_zero), || "0 is not valid".into());
    r.check(ls.contains(&omega_e11), || "omega*E11 is not valid".into());
    r.note(format!("valid L count={}", ls.len()));
    out.push(r);

    let mut regimes: Vec<(FieldHom, usize, usize, Vec<Mat>)> = vec![(emb.clone(), 2, 2, ls)];
    for q in [2, 3, 4] {
        let f = gf(q);
        for tau in enumerate_field_homs(&f, &f) {
            regimes.push((tau, 2, 2, vec![Mat::zeros(&f, 2, 2)]));
        }
    }
    regimes.push((FieldHom::identity(&gf(2)), 3, 3, vec![Mat::zeros(&gf(2), 2, 2)]));
    let forms: Vec<(String, CanonicalForm)> = regimes
        .iter()
        .flat_map(|(tau, m, n, ls)| {
            let label = format!("{} dst {m}x{n}", crate::canon::hom_label(tau));
            semrl_forms(tau, *m, *n, ls)
                .into_iter()
                .map(move |f| (label.clone(), f))
        })
        .collect();
    let results: Vec<Option<String>> = forms
        .par_iter()
        .map(|(label, form)| {
            let t = form.tabulate(DEFAULT_STATE_CAP).unwrap();
            if let Err((a, b)) = is_graph_hom(&t) {
                return Some(format!("{label} {}: edge {a} ~ {b} not preserved", form.describe()));
            }
            if !is_distance_preserving(&t, DEFAULT_STATE_CAP).unwrap() {
                return Some(format!("{label} {}: not distance preserving", form.describe()));
            }
            match recover_semrl(&t) {
                Ok(Some(g)) if g.tabulate(DEFAULT_STATE_CAP).ok().as_ref() == Some(&t) => None,
                other => Some(format!("{label} {}: recovery gave {other:?}", form.describe())),
            }
        })
        .collect();
    let mut r = VerificationReport::new(
        "semrl-forms",
        "GF(2)->GF(4), GF(q)->GF(q) for q in {2,3,4}, GF(2) 2x2 -> 3x3",
        Mode::Exhaustive {
            universe: forms.len() as u64,
        },
    );
    for res in results {
        match res {
            None => r.check(true, String::new),
            Some(w) => r.check(false, || w),
        }
    }
    out.push(r);
    out
}

// ---------------------------------------------------------------------------
// Colouring bound

/// Passes only on a complete refutation; a found table or an exhausted
/// budget fails with the search statistics as witness.
fn unsat_report(id: &str, p: &SearchProblem) -> VerificationReport {
    let (src, dst) = (p.src(), p.dst());
    let mut r = VerificationReport::new(id, map_name(src, dst), Mode::SearchUnsat { budget: p.budget });
    let outcome = search_hom(p).unwrap();
    let st = outcome.stats();
    let clique = |s: &MatrixSpace| s.q().pow(s.rows().max(s.cols()) as u32);
    r.note(format!(
        "largest cliques: source {} target {}",
        clique(src),
        clique(dst)
    ));
    r.note(format!(
        "outcome={} nodes={} backtracks={} max_depth={}",
        outcome.name(),
        st.nodes,
        st.backtracks,
        st.max_depth
    ));
    r.check(matches!(outcome, SearchOutcome::Unsat(_)), || match &outcome {
        SearchOutcome::Found(t, _) => format!("found {}", codes(t)),
        _ => format!("{} after {} nodes", outcome.name(), st.nodes),
    });
    r
}

/// No homomorphism `GF(3)^{2x2} -> GF(2)^{2x2}` fixes 0 and has a distance-2
/// image pair, while the reverse direction has one.
pub fn verify_colouring_bound(budget: u64) -> Vec<VerificationReport> {
    let c = Constraints {
        fix_zero_to_zero: true,
        require_distance2_image_pair: true,
        symmetry_reduction: true,
        ..Default::default()
    };
    let s3 = MatrixSpace::new(&gf(3), 2, 2);
    let s2 = MatrixSpace::new(&gf(2), 2, 2);
    let p = SearchProblem::new(&s3, &s2)
        .unwrap()
        .with_constraints(c)
        .with_budget(budget);
    let mut out = vec![unsat_report("colouring-bound", &p)];

    let p = SearchProblem::new(&s2, &s3)
        .unwrap()
        .with_constraints(c)
        .with_budget(budget);
    let mut r = VerificationReport::new(
        "colouring-bound-inversion",
        map_name(&s2, &s3),
        Mode::SearchUnsat { budget },
    );
    let outcome = search_hom(&p).unwrap();
    r.note(format!("outcome={} nodes={}", outcome.name(), outcome.stats().nodes));
    match &outcome {
        SearchOutcome::Found(t, _) => {
            let ok = is_graph_hom(t).is_ok() && t.image(&s2.zero()).is_zero() && !image_is_adjacent_set(t);
            r.check(ok, || format!("found table fails verification: {}", codes(t)));
        }
        other => r.check(false, || format!("expected a homomorphism, got {}", other.name())),
    }
    out.push(r);
    out
}

// ---------------------------------------------------------------------------
// Degenerate homomorphisms and their range

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegenerateRangeConfig {
    pub seed: u64,
    /// Draws at GF(2), repeats included.
    pub gf2_draws: usize,
    /// Distinct samples at GF(4).
    pub gf4_samples: usize,
    /// Node budget per sampling restart.
    pub restart_budget: u64,
}

impl DegenerateRangeConfig {
    pub fn new(seed: u64) -> Self {
        DegenerateRangeConfig {
            seed,
            gf2_draws: 500,
            gf4_samples: 100,
            restart_budget: 100_000,
        }
    }
}

/// Branch checks for one homomorphism fixing 0. Returns the class name and
/// the failed checks.
fn degenerate_branch_checks(t: &MapTable) -> (&'static str, Vec<String>) {
    let mut bad = Vec::new();
    if let Err((a, b)) = is_graph_hom(t) {
        bad.push(format!("edge {a} ~ {b} not preserved"));
        return ("not-hom", bad);
    }
    let src = t.src();
    let n = src.rows().min(src.cols());
    let degenerate = is_degenerate(t).is_some();
    let colouring = image_is_adjacent_set(t);
    let decomposition = range_decomposition(t);
    let a0 = src.iter().find(|a| t.image(a).rank() == n);
    let preserving = is_distance_preserving(t, DEFAULT_STATE_CAP).unwrap();
    if degenerate {
        if decomposition.is_none() {
            bad.push("degenerate without a two-set range decomposition".into());
        }
        if t.src().field() == t.dst().field() && !colouring {
            bad.push("degenerate over one field but not a colouring".into());
        }
        if let Some(a0) = &a0 {
            let low: Vec<Mat> = src
                .iter()
                .filter(|x| x.rank() <= 1)
                .map(|x| t.image(&x).clone())
                .collect();
            let around: Vec<Mat> = ball(a0).iter().map(|x| t.image(x).clone()).collect();
            if !adjacent_set(&low) {
                bad.push("images of rank <= 1 matrices are not an adjacent set".into());
            }
            if !adjacent_set(&around) {
                bad.push(format!("image of the ball around {a0} is not an adjacent set"));
            }
        }
    } else if a0.is_some() && !preserving {
        bad.push("non-degenerate with a full-rank image but not distance preserving".into());
    }
    if !preserving && decomposition.is_none() {
        bad.push("neither distance preserving nor inside two translated maximal sets".into());
    }
    let class = match (colouring, degenerate, preserving) {
        (true, _, _) => "colouring",
        (false, true, _) => "degenerate",
        (false, false, true) => "distance-preserving",
        (false, false, false) => "other",
    };
    (class, bad)
}

fn adjacent_set(v: &[Mat]) -> bool {
    v.iter()
        .enumerate()
        .all(|(i, a)| v[i + 1..].iter().all(|b| a == b || a.sub(b).rank() == 1))
}

/// Canon-built homomorphisms fixing 0 added to a sampled regime.
fn injected_homs(space: &MatrixSpace, seed: u64) -> Vec<(String, MapTable)> {
    let f = space.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1CE);
    let mut out = Vec::new();
    for tau in enumerate_field_homs(f, f) {
        for transpose in [false, true] {
            let p = random_invertible(f, 2, &mut rng);
            let q = random_invertible(f, 2, &mut rng);
            let form = CanonicalForm::semrl(space, space, p, q, tau.clone(), Mat::zeros(f, 2, 2), transpose).unwrap();
            out.push((form.describe(), form.tabulate(DEFAULT_STATE_CAP).unwrap()));
        }
    }
    for target in maximal_sets_through(&space.zero()) {
        let t = make_colouring(space, &target, None).unwrap();
        out.push((format!("colouring into {}", target.describe()), t));
    }
    out
}

/// Sampled homomorphisms fixing 0 at GF(2) and GF(4), each checked against
/// its branch: degenerate ones have a two-set range decomposition and, given
/// a full-rank image, adjacent images of the low-rank matrices and of the
/// ball around it; non-degenerate ones with a full-rank image preserve
/// distance.
pub fn verify_degenerate_range(cfg: &DegenerateRangeConfig) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for q in [2u64, 4] {
        let space = MatrixSpace::new(&gf(q), 2, 2);
        let mut c = Constraints {
            fix_zero_to_zero: true,
            ..Default::default()
        };
        let p = SearchProblem::new(&space, &space)
            .unwrap()
            .with_budget(cfg.restart_budget)
            .with_seed(cfg.seed);
        let (samples, size) = if q == 2 {
            let p = p.with_constraints(c);
            let v = draw_homs(&p, cfg.gf2_draws, cfg.seed, cfg.gf2_draws * 4).unwrap();
            (v, cfg.gf2_draws)
        } else {
            c.require_distance2_image_pair = true;
            let p = p.with_constraints(c);
            let v = sample_homs_with(&p, cfg.gf4_samples, cfg.seed, cfg.gf4_samples * 10).unwrap();
            (v, cfg.gf4_samples)
        };
        let mut r = VerificationReport::new(
            "degenerate-range",
            map_name(&space, &space),
            Mode::Sampled { seed: cfg.seed, size },
        );
        let distinct: HashSet<Vec<usize>> = samples.iter().map(MapTable::codes).collect();
        r.note(format!("sampled={} distinct={}", samples.len(), distinct.len()));
        if q == 2 {
            r.note("field below the |D| >= 4 hypothesis; checked under the small-field extension of the range results");
            r.note("sampler: restarts with 0 -> 0, repeats kept");
        } else {
            r.note("sampler: restarts with 0 -> 0 and diag(1,1) mapped to rank 2, distinct only");
        }
        if samples.len() < SAMPLE_FLOOR {
            r.fail(format!("only {} samples within the restart budget", samples.len()));
        }
        let injected = injected_homs(&space, cfg.seed);
        r.note(format!("injected canon-built={}", injected.len()));
        let labelled: Vec<(String, &MapTable)> = samples
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("sample {i}"), t))
            .chain(injected.iter().map(|(l, t)| (l.clone(), t)))
            .collect();
        let results: Vec<(&'static str, Vec<String>)> =
            labelled.par_iter().map(|(_, t)| degenerate_branch_checks(t)).collect();
        let mut classes: BTreeMap<&str, usize> = BTreeMap::new();
        for ((label, t), (class, bad)) in labelled.iter().zip(results) {
            *classes.entry(class).or_default() += 1;
            r.check(bad.is_empty(), || format!("{label}: {} [{}]", bad.join("; "), codes(t)));
        }
        let split: Vec<String> = classes.iter().map(|(k, v)| format!("{k}={v}")).collect();
        r.note(format!("classes {}", split.join(" ")));
        if q == 4 {
            for n in exploratory_wide_target(cfg.seed) {
                r.note(n);
            }
        }
        out.push(r);
    }
    out
}

/// Branch checks on canon-built maps `GF(4)^{2x2} -> GF(16)^{2x2}`, where the
/// destination field lies above the size bound of the range results. The
/// outcome is recorded, never asserted.
fn exploratory_wide_target(seed: u64) -> Vec<String> {
    let src = MatrixSpace::new(&gf(4), 2, 2);
    let dst = MatrixSpace::new(&gf(16), 2, 2);
    let k = dst.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x16);
    let mut tables = Vec::new();
    for tau in enumerate_field_homs(src.field(), k) {
        for transpose in [false, true] {
            let (p, q) = (random_invertible(k, 2, &mut rng), random_invertible(k, 2, &mut rng));
            let form = CanonicalForm::semrl(&src, &dst, p, q, tau.clone(), Mat::zeros(k, 2, 2), transpose).unwrap();
            tables.push(form.tabulate(DEFAULT_STATE_CAP).unwrap());
        }
    }
    for target in maximal_sets_through(&dst.zero()).into_iter().step_by(5) {
        tables.push(make_colouring(&src, &target, None).unwrap());
    }
    let results: Vec<(&'static str, Vec<String>)> = tables.par_iter().map(degenerate_branch_checks).collect();
    let mut classes: BTreeMap<&str, usize> = BTreeMap::new();
    let mut deviations = 0;
    for (class, bad) in &results {
        *classes.entry(class).or_default() += 1;
        deviations += bad.len();
    }
    let split: Vec<String> = classes.iter().map(|(k, v)| format!("{k}={v}")).collect();
    vec![format!(
        "exploratory GF(4) 2x2 -> GF(16) 2x2, not asserted: canon-built={} {} deviations={deviations}",
        tables.len(),
        split.join(" ")
    )]
}

// ---------------------------------------------------------------------------
// Non-degenerate homomorphisms

/// Canon-built non-degenerate homomorphisms fixing 0.
pub fn nondegenerate_family(seed: u64) -> Vec<CanonicalForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for q in [2, 3, 4] {
        let f = gf(q);
        let s = MatrixSpace::new(&f, 2, 2);
        out.push(
            CanonicalForm::additive(
                &s,
                &s,
                Mat::identity(&f, 2),
                FieldHom::identity(&f),
                Mat::identity(&f, 2),
            )
            .unwrap(),
        );
        for tau in enumerate_field_homs(&f, &f) {
            let (p, qm) = (random_invertible(&f, 2, &mut rng), random_invertible(&f, 2, &mut rng));
            out.push(CanonicalForm::additive_transpose(&s, &s, p, tau, qm).unwrap());
        }
    }
    let emb = enumerate_field_homs(&gf(2), &gf(4)).remove(0);
    let k = emb.dst().clone();
    let s2 = MatrixSpace::new(emb.src(), 2, 2);
    let s4 = MatrixSpace::new(&k, 2, 2);
    let (p, q) = (random_invertible(&k, 2, &mut rng), random_invertible(&k, 2, &mut rng));
    out.push(CanonicalForm::additive(&s2, &s4, p, emb.clone(), q).unwrap());
    let ls = valid_ls(&emb, 2, DEFAULT_STATE_CAP).unwrap();
    for l in ls.iter().filter(|l| !l.is_zero()).take(3) {
        for transpose in [false, true] {
            let (p, q) = (random_invertible(&k, 2, &mut rng), random_invertible(&k, 2, &mut rng));
            out.push(CanonicalForm::semrl(&s2, &s4, p, q, emb.clone(), l.clone(), transpose).unwrap());
        }
    }
    let f2 = gf(2);
    let rect = MatrixSpace::new(&f2, 2, 3);
    let big = MatrixSpace::new(&f2, 3, 3);
    let p = Mat::from_csv(&f2, 3, 2, "1,0,0,1,1,1").unwrap();
    let q = random_invertible(&f2, 3, &mut rng);
    out.push(CanonicalForm::additive(&rect, &big, p, FieldHom::identity(&f2), q).unwrap());
    out
}

/// Image uniqueness of maximal sets through 0, the dimension bound on
/// adjacent sets and order monotonicity, for canon-built non-degenerate
/// homomorphisms.
pub fn verify_nondegenerate_props(seed: u64) -> Vec<VerificationReport> {
    let forms = nondegenerate_family(seed);
    let regime = format!("{} canon-built forms fixing 0", forms.len());
    let tables: Vec<MapTable> = forms
        .par_iter()
        .map(|f| f.tabulate(DEFAULT_STATE_CAP).unwrap())
        .collect();
    let mut uniq = VerificationReport::new(
        "nondegenerate-image-uniqueness",
        &regime,
        Mode::Exhaustive { universe: 0 },
    );
    let mut dim = VerificationReport::new("nondegenerate-dim-bound", &regime, Mode::Exhaustive { universe: 0 });
    let mut order = VerificationReport::new("order-monotonicity", &regime, Mode::Exhaustive { universe: 0 });
    let mut skipped_dim = 0;
    for (form, t) in forms.iter().zip(&tables) {
        let label = form.describe();
        let nondeg = is_graph_hom(t).is_ok() && is_degenerate(t).is_none() && t.image(&t.src().zero()).is_zero();
        uniq.check(nondeg, || {
            format!("{label}: not a non-degenerate homomorphism fixing 0")
        });
        if !nondeg {
            continue;
        }
        let zero = t.src().zero();
        for m in maximal_sets_through(&zero) {
            let img = dedup_sorted(t, m.points().iter().map(|x| t.image(x).clone()).collect());
            let containing: Vec<MaximalSet> = match maximal_sets_containing_pair(&img[0], &img[1]) {
                Ok((a, b)) => [a, b]
                    .into_iter()
                    .filter(|s| img.iter().all(|y| s.contains(y)))
                    .collect(),
                Err(_) => Vec::new(),
            };
            let in_line = containing
                .first()
                .map(|s| line_through(s, &img[0], &img[1]).unwrap())
                .is_some_and(|l| img.iter().all(|y| l.contains(y)));
            uniq.check(containing.len() == 1 && !in_line, || {
                format!(
                    "{label}: image of {} lies in {} maximal sets, inside a line: {in_line}",
                    m.describe(),
                    containing.len()
                )
            });
        }
        if t.src().q() < 4 {
            skipped_dim += 1;
        } else {
            for m in maximal_sets_through(&zero) {
                let others: Vec<Mat> = m.points().into_iter().filter(|x| !x.is_zero()).collect();
                for s in adjacent_subsets(&others, 3) {
                    let mut set = vec![zero.clone()];
                    set.extend(s);
                    let img = dedup_sorted(t, set.iter().map(|x| t.image(x).clone()).collect());
                    let (d0, d1) = (adjacent_set_dim(&set).unwrap(), adjacent_set_dim(&img).unwrap());
                    dim.check(d1 <= d0, || format!("{label}: dim {d1} > {d0} on {}", join(&set)));
                }
            }
        }
        match check_order_monotonicity(t, TRIPLE_CAP, seed) {
            Ok(v) => {
                order.check(v.is_empty(), || format!("{label}: {}", v[0]));
            }
            Err(e) => order.check(false, || format!("{label}: {e}")),
        }
        let c = contraction_violations(t);
        order.check(c.is_empty(), || {
            format!("{label}: contraction fails at {} {}", c[0].0, c[0].1)
        });
    }
    dim.note(format!("forms with |D| < 4 skipped={skipped_dim}"));
    for r in [&mut uniq, &mut dim, &mut order] {
        r.mode = Mode::Exhaustive { universe: r.checked };
    }
    vec![uniq, dim, order]
}

fn dedup_sorted(t: &MapTable, mut v: Vec<Mat>) -> Vec<Mat> {
    v.sort_by_key(|y| t.dst().encode(y));
    v.dedup();
    v
}

fn join(v: &[Mat]) -> String {
    v.iter().map(Mat::to_string).collect::<Vec<_>>().join(" ")
}

/// Nonempty subsets of `pts` with at most `k` elements, in lexicographic order.
fn adjacent_subsets(pts: &[Mat], k: usize) -> Vec<Vec<Mat>> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(pts: &[Mat], k: usize, start: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<Mat>>) {
        for i in start..pts.len() {
            stack.push(i);
            out.push(stack.iter().map(|&j| pts[j].clone()).collect());
            if stack.len() < k {
                rec(pts, k, i + 1, stack, out);
            }
            stack.pop();
        }
    }
    rec(pts, k, 0, &mut stack, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Suites

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Metric,
    MinusOrder,
    FieldHoms,
    Additive,
    Semrl,
    ColouringBound,
    DegenerateRange,
    Nondegenerate,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Metric,
        Suite::MinusOrder,
        Suite::FieldHoms,
        Suite::Additive,
        Suite::Semrl,
        Suite::ColouringBound,
        Suite::DegenerateRange,
        Suite::Nondegenerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::MinusOrder => "minus-order",
            Suite::FieldHoms => "field-homs",
            Suite::Additive => "additive",
            Suite::Semrl => "semrl",
            Suite::ColouringBound => "colouring-bound",
            Suite::DegenerateRange => "degenerate-range",
            Suite::Nondegenerate => "nondegenerate",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }

    /// Report ids the suite emits.
    pub fn report_ids(self) -> &'static [&'static str] {
        match self {
            Suite::Metric => &[
                "metric-identity",
                "edge-clique-law",
                "clique-intersections",
                "three-point-membership",
                "rank-one-support",
            ],
            Suite::MinusOrder => &["minus-order-characterisations", "minus-order-idempotents"],
            Suite::FieldHoms => &["field-hom-counts"],
            Suite::Additive => &["additive-classification", "degenerate-additive-colouring"],
            Suite::Semrl => &["semrl-valid-l-surjective", "semrl-valid-l-embedding", "semrl-forms"],
            Suite::ColouringBound => &["colouring-bound", "colouring-bound-inversion"],
            Suite::DegenerateRange => &["degenerate-range"],
            Suite::Nondegenerate => &[
                "nondegenerate-image-uniqueness",
                "nondegenerate-dim-bound",
                "order-monotonicity",
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Vec<VerificationReport> {
    match suite {
        Suite::Metric => verify_metric_and_structure(&METRIC_REGIMES),
        Suite::MinusOrder => verify_minus_order(),
        Suite::FieldHoms => verify_field_homs(),
        Suite::Additive => verify_additive_classification().0,
        Suite::Semrl => verify_semrl_theorem(),
        Suite::ColouringBound => verify_colouring_bound(cfg.budget),
        Suite::DegenerateRange => verify_degenerate_range(&DegenerateRangeConfig::new(cfg.seed)),
        Suite::Nondegenerate => verify_nondegenerate_props(cfg.seed),
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<VerificationReport> {
    Suite::ALL.iter().flat_map(|&s| run_suite(s, cfg)).collect()
}

/// Each checked claim and the report ids that exercise it.
pub const COVERAGE: &[(&str, &[&str])] = &[
    ("graph distance equals rank distance", &["metric-identity"]),
    (
        "every edge lies in exactly two maximal sets of different types",
        &["edge-clique-law"],
    ),
    (
        "maximal set intersections: one point for one type, a full line across types",
        &["clique-intersections"],
    ),
    ("lines have as many points as the field", &["clique-intersections"]),
    (
        "membership from adjacency with three noncollinear points",
        &["three-point-membership"],
    ),
    (
        "support dichotomy for matrices adjacent to two multiples of a unit",
        &["rank-one-support"],
    ),
    (
        "minus order: rank, g-inverse and normal-form characterisations agree",
        &["minus-order-characterisations"],
    ),
    ("minus order below an idempotent", &["minus-order-idempotents"]),
    (
        "field homomorphisms are determined by roots of the defining polynomial",
        &["field-hom-counts"],
    ),
    (
        "additive homomorphisms are standard, transposed, or colourings",
        &["additive-classification"],
    ),
    (
        "degenerate additive homomorphisms are colourings",
        &["degenerate-additive-colouring"],
    ),
    (
        "only L = 0 works for a surjective field map",
        &["semrl-valid-l-surjective"],
    ),
    (
        "nonzero L can work for a proper field embedding",
        &["semrl-valid-l-embedding"],
    ),
    (
        "Šemrl-type forms are distance preserving and recoverable",
        &["semrl-forms"],
    ),
    (
        "a larger source field forces a colouring",
        &["colouring-bound", "colouring-bound-inversion"],
    ),
    (
        "degenerate range lies in two translated maximal sets",
        &["degenerate-range"],
    ),
    (
        "degenerate homomorphisms with a full-rank image have adjacent low-rank images",
        &["degenerate-range"],
    ),
    (
        "non-degenerate homomorphisms with a full-rank image preserve distance",
        &["degenerate-range"],
    ),
    (
        "degenerate homomorphisms over one field are colourings",
        &["degenerate-range"],
    ),
    (
        "non-degenerate images of maximal sets span a unique maximal set",
        &["nondegenerate-image-uniqueness"],
    ),
    (
        "dimension does not grow under non-degenerate homomorphisms",
        &["nondegenerate-dim-bound"],
    ),
    (
        "homomorphisms fixing 0 are monotone for the minus order",
        &["order-monotonicity"],
    ),
    ("homomorphisms contract distance", &["order-monotonicity"]),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_ids_exist() {
        let ids: HashSet<&str> = Suite::ALL.iter().flat_map(|s| s.report_ids().iter().copied()).collect();
        for (claim, used) in COVERAGE {
            for id in *used {
                assert!(ids.contains(id), "{claim}: unknown report {id}");
            }
        }
        let covered: HashSet<&str> = COVERAGE.iter().flat_map(|(_, v)| v.iter().copied()).collect();
        assert_eq!(covered, ids);
    }

    #[test]
    fn generator_oracle_matches_known_counts() {
        assert_eq!(count_homs_by_generator(&gf(2), &gf(4)), 1);
        assert_eq!(count_homs_by_generator(&gf(4), &gf(4)), 2);
        assert_eq!(count_homs_by_generator(&gf(3), &gf(9)), 1);
        assert_eq!(count_homs_by_generator(&gf(2), &gf(3)), 0);
    }

    #[test]
    fn report_rendering() {
        let mut r = VerificationReport::new("x", "GF(2) 2x2", Mode::Exhaustive { universe: 3 });
        r.check(true, String::new);
        r.check(false, || "w".into());
        assert_eq!(
            r.render(),
            "x fail 2 1\n  regime GF(2) 2x2\n  mode exhaustive universe=3\n  witness w\n"
        );
    }

    #[test]
    fn subsets_enumerated() {
        let f = gf(2);
        let pts: Vec<Mat> = (0..4).map(|i| Mat::unit(&f, 2, 2, i / 2, i % 2)).collect();
        assert_eq!(adjacent_subsets(&pts, 2).len(), 4 + 6);
        assert_eq!(adjacent_subsets(&pts, 4).len(), 15);
    }

    #[test]
    fn additive_counts_round_trip() {
        let c = AdditiveCounts {
            maps: 1,
            homs: 2,
            colourings: 3,
            standard: 4,
            transpose: 5,
            degenerate: 6,
        };
        assert_eq!(AdditiveCounts::parse(&c.to_text()), Some(c));
    }

    #[test]
    fn exhausted_budget_fails_the_report() {
        let c = Constraints {
            fix_zero_to_zero: true,
            require_distance2_image_pair: true,
            ..Default::default()
        };
        let p = SearchProblem::new(&MatrixSpace::new(&gf(3), 2, 2), &MatrixSpace::new(&gf(2), 2, 2))
            .unwrap()
            .with_constraints(c)
            .with_budget(10);
        let r = unsat_report("colouring-bound", &p);
        assert!(!r.passed());
        assert!(r.witnesses[0].starts_with("budget-exceeded"), "{:?}", r.witnesses);
    }

    #[test]
    fn injected_semrl_forms_take_the_distance_preserving_branch() {
        let s = MatrixSpace::new(&gf(4), 2, 2);
        let semrl: Vec<_> = injected_homs(&s, 42)
            .into_iter()
            .filter(|(l, _)| !l.starts_with("colouring"))
            .collect();
        assert_eq!(semrl.len(), 4);
        for (label, t) in &semrl {
            assert_eq!(degenerate_branch_checks(t), ("distance-preserving", vec![]), "{label}");
            assert!(is_degenerate(t).is_none());
        }
    }

    #[test]
    fn suites_small_pass() {
        assert!(all_passed(&verify_field_homs()));
        assert!(all_passed(&verify_metric_and_structure(&[(2, 2, 2)])));
    }
}
