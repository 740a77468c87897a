//! Backtracking search for graph homomorphisms between matrix graphs.
//!
//! Domains are bitsets over destination encodings. Assigning a vertex
//! intersects the domains of its unassigned source neighbours with the
//! destination neighbourhood of the chosen image, so a wiped-out domain is
//! detected one step early.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::classify::{is_degenerate, parse_arrow, parse_header, ClassifyError, MapTable};
use crate::geometry::{maximal_sets_through, MatrixGraph};
use crate::matrices::{Mat, MatrixSpace};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Largest destination graph the solver will build adjacency bitsets for.
pub const MAX_DST_VERTICES: usize = 1 << 12;
/// Largest source graph the solver will search over.
pub const MAX_SRC_VERTICES: usize = 1 << 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error(transparent)]
    Parse(#[from] ClassifyError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub fix_zero_to_zero: bool,
    pub require_distance2_image_pair: bool,
    pub require_degenerate_witness: bool,
    /// Pins representatives of the destination symmetry orbits before searching.
    pub symmetry_reduction: bool,
}

impl Constraints {
    pub const NAMES: [&'static str; 4] = [
        "fix_zero_to_zero",
        "require_distance2_image_pair",
        "require_degenerate_witness",
        "symmetry_reduction",
    ];

    pub fn flag_mut(&mut self, name: &str) -> Option<&mut bool> {
        match name {
            "fix_zero_to_zero" => Some(&mut self.fix_zero_to_zero),
            "require_distance2_image_pair" => Some(&mut self.require_distance2_image_pair),
            "require_degenerate_witness" => Some(&mut self.require_degenerate_witness),
            "symmetry_reduction" => Some(&mut self.symmetry_reduction),
            _ => None,
        }
    }

    fn flags(&self) -> [bool; 4] {
        [
            self.fix_zero_to_zero,
            self.require_distance2_image_pair,
            self.require_degenerate_witness,
            self.symmetry_reduction,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchProblem {
    src: MatrixSpace,
    dst: MatrixSpace,
    pins: Vec<(Mat, Mat)>,
    pub constraints: Constraints,
    pub budget: u64,
    pub seed: u64,
}

impl SearchProblem {
    pub fn new(src: &MatrixSpace, dst: &MatrixSpace) -> Result<SearchProblem, SearchError> {
        let ns = src
            .ensure_within(MAX_SRC_VERTICES as u64)
            .map_err(|e| SearchError::InvalidProblem(e.to_string()))?;
        let nd = dst
            .ensure_within(MAX_DST_VERTICES as u64)
            .map_err(|e| SearchError::InvalidProblem(e.to_string()))?;
        debug_assert!(ns > 0 && nd > 0);
        Ok(SearchProblem {
            src: src.clone(),
            dst: dst.clone(),
            pins: Vec::new(),
            constraints: Constraints::default(),
            budget: DEFAULT_BUDGET,
            seed: 0,
        })
    }

    pub fn src(&self) -> &MatrixSpace {
        &self.src
    }

    pub fn dst(&self) -> &MatrixSpace {
        &self.dst
    }

    pub fn pins(&self) -> &[(Mat, Mat)] {
        &self.pins
    }

    /// Adds `a ↦ b`, rejecting pins that contradict earlier ones.
    pub fn pin(&mut self, a: Mat, b: Mat) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::InvalidProblem(m));
        if !self.src.contains(&a) || !self.dst.contains(&b) {
            return bad(format!("pin {a} => {b} has the wrong shape or field"));
        }
        for (x, y) in &self.pins {
            if x == &a {
                if y == &b {
                    return Ok(());
                }
                return bad(format!("{a} pinned to both {y} and {b}"));
            }
            if x.sub(&a).rank() == 1 && y.sub(&b).rank() != 1 {
                return bad(format!("{x} ~ {a} but pinned images {y}, {b} are not adjacent"));
            }
        }
        self.pins.push((a, b));
        Ok(())
    }

    pub fn with_pin(mut self, a: Mat, b: Mat) -> Result<SearchProblem, SearchError> {
        self.pin(a, b)?;
        Ok(self)
    }

    pub fn with_constraints(mut self, c: Constraints) -> SearchProblem {
        self.constraints = c;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> SearchProblem {
        self.budget = budget;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> SearchProblem {
        self.seed = seed;
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("problem v1\n");
        writeln!(out, "src {}", self.src.field().spec()).unwrap();
        writeln!(out, "src shape {} {}", self.src.rows(), self.src.cols()).unwrap();
        writeln!(out, "dst {}", self.dst.field().spec()).unwrap();
        writeln!(out, "dst shape {} {}", self.dst.rows(), self.dst.cols()).unwrap();
        for (a, b) in &self.pins {
            writeln!(out, "pin {a} => {b}").unwrap();
        }
        for (name, on) in Constraints::NAMES.iter().zip(self.constraints.flags()) {
            if on {
                writeln!(out, "constraint {name}").unwrap();
            }
        }
        writeln!(out, "budget {}", self.budget).unwrap();
        writeln!(out, "seed {}", self.seed).unwrap();
        out
    }

    pub fn parse(text: &str) -> Result<SearchProblem, SearchError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (src, dst, lines) = parse_header(&mut lines, "problem v1")?;
        let mut p = SearchProblem::new(&src, &dst)?;
        let perr = |line: usize, msg: String| SearchError::Parse(ClassifyError::Parse { line, msg });
        for (line, l) in lines {
            let (key, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let rest = rest.trim();
            match key {
                "pin" => {
                    let (a, b) = parse_arrow(line, rest, &src, &dst)?;
                    p.pin(a, b)?;
                }
                "constraint" => {
                    *p.constraints
                        .flag_mut(rest)
                        .ok_or_else(|| perr(line, format!("unknown constraint `{rest}`")))? = true;
                }
                "budget" => p.budget = rest.parse().map_err(|_| perr(line, format!("bad budget `{rest}`")))?,
                "seed" => p.seed = rest.parse().map_err(|_| perr(line, format!("bad seed `{rest}`")))?,
                _ => return Err(perr(line, format!("unknown directive `{key}`"))),
            }
        }
        Ok(p)
    }

    /// Pins implied by the constraints, checked against the user pins.
    fn effective_pins(&self) -> Result<Vec<(Mat, Mat)>, SearchError> {
        let c = &self.constraints;
        let invalid = |m: &str| Err(SearchError::InvalidProblem(m.into()));
        if c.symmetry_reduction {
            if !self.pins.is_empty() {
                return invalid("symmetry reduction cannot be combined with explicit pins");
            }
            if c.require_degenerate_witness {
                return invalid("symmetry reduction cannot be combined with require_degenerate_witness");
            }
            let mut pins = vec![(self.src.zero(), self.dst.zero())];
            if c.require_distance2_image_pair {
                if self.src.rows().min(self.src.cols()) != 2 {
                    return invalid("symmetry reduction with a distance-2 pair needs a source of minimum dimension 2");
                }
                pins.push((self.src.diag_ones(2), self.dst.diag_ones(2)));
            }
            pins.push((self.src.unit(0, 0), self.dst.unit(0, 0)));
            return Ok(pins);
        }
        let mut p = self.clone();
        if c.fix_zero_to_zero {
            p.pin(self.src.zero(), self.dst.zero())?;
        }
        Ok(p.pins)
    }

    /// Source vertices `(0, diag(1, 1))` whose images must be at distance 2.
    /// With a source of minimum dimension 2 every distance-2 image pair can
    /// be moved onto this one by a source automorphism and a translation, so
    /// existence is unaffected. Larger sources fall back to a post-filter.
    fn designated_pair(&self) -> Option<(usize, usize)> {
        let c = &self.constraints;
        (c.require_distance2_image_pair && !c.symmetry_reduction && self.src.rows().min(self.src.cols()) == 2)
            .then(|| (0, self.src.encode(&self.src.diag_ones(2))))
    }

    /// Whether the distance-2 and degenerate post-filters accept `t`.
    fn accepts(&self, t: &MapTable) -> bool {
        let c = &self.constraints;
        if c.require_distance2_image_pair && !c.symmetry_reduction && !has_distance2_pair(t) {
            return false;
        }
        !c.require_degenerate_witness || is_degenerate(t).is_some()
    }
}

fn has_distance2_pair(t: &MapTable) -> bool {
    let img = t.image_set();
    img.iter()
        .enumerate()
        .any(|(i, a)| img[i + 1..].iter().any(|b| a.sub(b).rank() == 2))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub backtracks: u64,
    pub max_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(MapTable, SearchStats),
    Unsat(SearchStats),
    BudgetExceeded(SearchStats),
}

impl SearchOutcome {
    pub fn stats(&self) -> SearchStats {
        match self {
            SearchOutcome::Found(_, s) | SearchOutcome::Unsat(s) | SearchOutcome::BudgetExceeded(s) => *s,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SearchOutcome::Found(..) => "found",
            SearchOutcome::Unsat(_) => "unsat",
            SearchOutcome::BudgetExceeded(_) => "budget-exceeded",
        }
    }
}

/// How an exhaustive run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Exhausted,
    Stopped,
    Budget,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub tables: Vec<MapTable>,
    pub termination: Termination,
    pub stats: SearchStats,
}

type Bits = Vec<u64>;

fn bit(b: &[u64], i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

struct Solver<'p> {
    problem: &'p SearchProblem,
    src_adj: Vec<Vec<u32>>,
    dst_adj: Vec<Bits>,
    /// Unpinned source vertices in assignment order.
    order: Vec<usize>,
    pinned: Vec<Option<usize>>,
    /// Source maximal sets of at least three points; images must be distinct.
    cliques: Vec<Vec<u32>>,
    cliques_of: Vec<Vec<u32>>,
    pair: Option<(usize, usize)>,
    words: usize,
    nd: usize,
}

impl<'p> Solver<'p> {
    fn new(problem: &'p SearchProblem) -> Result<Solver<'p>, SearchError> {
        let pins = problem.effective_pins()?;
        let graph = MatrixGraph::new(&problem.src, MAX_SRC_VERTICES as u64)
            .map_err(|e| SearchError::InvalidProblem(e.to_string()))?;
        let ns = graph.vertex_count();
        let src_adj: Vec<Vec<u32>> = (0..ns).map(|v| graph.neighbors(v).to_vec()).collect();
        let dst_graph = MatrixGraph::new(&problem.dst, MAX_DST_VERTICES as u64)
            .map_err(|e| SearchError::InvalidProblem(e.to_string()))?;
        let nd = dst_graph.vertex_count();
        let words = nd.div_ceil(64);
        let dst_adj = (0..nd)
            .map(|y| {
                let mut b = vec![0u64; words];
                for &z in dst_graph.neighbors(y) {
                    b[z as usize / 64] |= 1 << (z % 64);
                }
                b
            })
            .collect();
        let mut pinned = vec![None; ns];
        for (a, b) in &pins {
            pinned[problem.src.encode(a)] = Some(problem.dst.encode(b));
        }
        // Designated vertices first, then BFS from them and the pinned set
        // (or from 0), neighbours in encoding order.
        let pair = problem.designated_pair();
        let mut seen = vec![false; ns];
        let mut queue: VecDeque<usize> = (0..ns).filter(|&v| pinned[v].is_some()).collect();
        if let Some((a, b)) = pair {
            queue.extend([a, b].into_iter().filter(|&v| pinned[v].is_none()));
        }
        if queue.is_empty() {
            queue.push_back(0);
        }
        for &v in &queue {
            seen[v] = true;
        }
        let mut order = Vec::with_capacity(ns);
        while let Some(v) = queue.pop_front() {
            if pinned[v].is_none() {
                order.push(v);
            }
            for &w in &src_adj[v] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    queue.push_back(w as usize);
                }
            }
        }
        let mut seen_sets = HashSet::new();
        let mut cliques: Vec<Vec<u32>> = Vec::new();
        for x in problem.src.iter() {
            for m in maximal_sets_through(&x) {
                let mut codes: Vec<u32> = m.points().iter().map(|p| problem.src.encode(p) as u32).collect();
                codes.sort_unstable();
                if codes.len() >= 3 && seen_sets.insert(codes.clone()) {
                    cliques.push(codes);
                }
            }
        }
        let mut cliques_of = vec![Vec::new(); ns];
        for (i, c) in cliques.iter().enumerate() {
            for &v in c {
                cliques_of[v as usize].push(i as u32);
            }
        }
        Ok(Solver {
            problem,
            src_adj,
            dst_adj,
            order,
            pinned,
            cliques,
            cliques_of,
            pair,
            words,
            nd,
        })
    }

    fn partner(&self, v: usize) -> Option<usize> {
        match self.pair {
            Some((a, b)) if v == a => Some(b),
            Some((a, b)) if v == b => Some(a),
            _ => None,
        }
    }

    /// Destination codes at distance exactly 2 from `y`.
    fn distance2_mask(&self, y: usize) -> Bits {
        let dst = &self.problem.dst;
        let a = dst.decode(y);
        let mut b = vec![0u64; self.words];
        for z in 0..self.nd {
            if dst.decode(z).sub(&a).rank() == 2 {
                b[z / 64] |= 1 << (z % 64);
            }
        }
        b
    }

    /// Restores domains down to trail length `mark`.
    fn undo(dom: &mut [Bits], trail: &mut Vec<(usize, Bits)>, mark: usize) {
        while trail.len() > mark {
            let (w, old) = trail.pop().unwrap();
            dom[w] = old;
        }
    }

    /// Narrows `dom[w]` to `dom[w] & mask`, recording the old domain.
    /// Returns `None` on wipe-out, otherwise whether anything changed.
    fn narrow(dom: &mut [Bits], trail: &mut Vec<(usize, Bits)>, w: usize, mask: &[u64]) -> Option<bool> {
        if !dom[w].iter().zip(mask).any(|(d, a)| d & !a != 0) {
            return Some(false);
        }
        trail.push((w, dom[w].clone()));
        let mut any = 0;
        for (d, a) in dom[w].iter_mut().zip(mask) {
            *d &= a;
            any |= *d;
        }
        (any != 0).then_some(true)
    }

    /// Propagates to a fixpoint from the vertices in `fixed`, whose domains
    /// are singletons. Neighbours of a fixed vertex must map next to its
    /// image, and the images of a source clique are pairwise distinct, so a
    /// clique whose free vertices have exactly as many candidate values as
    /// vertices must use every value. Returns false on a contradiction.
    fn propagate(
        &self,
        dom: &mut [Bits],
        trail: &mut Vec<(usize, Bits)>,
        assigned: &[Option<usize>],
        mut fixed: Vec<usize>,
    ) -> bool {
        let single = |b: &Bits| -> Option<usize> {
            let mut found = None;
            for (i, &w) in b.iter().enumerate() {
                if w != 0 {
                    if found.is_some() || w.count_ones() != 1 {
                        return None;
                    }
                    found = Some(i * 64 + w.trailing_zeros() as usize);
                }
            }
            found
        };
        let mut dirty: Vec<u32> = Vec::new();
        let mut in_dirty = vec![false; self.cliques.len()];
        let mut once = vec![0u64; self.words];
        let mut twice = vec![0u64; self.words];
        loop {
            while let Some(v) = fixed.pop() {
                let y = single(&dom[v]).expect("fixed vertices have singleton domains");
                if let Some(w) = self.partner(v) {
                    if assigned[w].is_none() {
                        let mask = self.distance2_mask(y);
                        match Self::narrow(dom, trail, w, &mask) {
                            None => return false,
                            Some(true) if single(&dom[w]).is_some() => fixed.push(w),
                            _ => {}
                        }
                    }
                }
                for &w in &self.src_adj[v] {
                    let w = w as usize;
                    if assigned[w].is_some() {
                        continue;
                    }
                    match Self::narrow(dom, trail, w, &self.dst_adj[y]) {
                        None => return false,
                        Some(false) => {}
                        Some(true) => {
                            if single(&dom[w]).is_some() {
                                fixed.push(w);
                            }
                            for &c in &self.cliques_of[w] {
                                if !in_dirty[c as usize] {
                                    in_dirty[c as usize] = true;
                                    dirty.push(c);
                                }
                            }
                        }
                    }
                }
            }
            let Some(c) = dirty.pop() else { return true };
            in_dirty[c as usize] = false;
            let free: Vec<usize> = self.cliques[c as usize]
                .iter()
                .map(|&v| v as usize)
                .filter(|&v| assigned[v].is_none())
                .collect();
            once.iter_mut().for_each(|x| *x = 0);
            twice.iter_mut().for_each(|x| *x = 0);
            for &v in &free {
                for ((o, t), d) in once.iter_mut().zip(twice.iter_mut()).zip(&dom[v]) {
                    *t |= *o & d;
                    *o |= d;
                }
            }
            let values: u32 = once.iter().map(|x| x.count_ones()).sum();
            if (values as usize) < free.len() {
                return false;
            }
            if values as usize > free.len() {
                continue;
            }
            let singles: Bits = once.iter().zip(&twice).map(|(o, t)| o & !t).collect();
            for &v in &free {
                let hit: u32 = dom[v].iter().zip(&singles).map(|(d, s)| (d & s).count_ones()).sum();
                if hit > 1 {
                    return false;
                }
                if hit == 1 && single(&dom[v]).is_none() {
                    Self::narrow(dom, trail, v, &singles);
                    fixed.push(v);
                    for &c2 in &self.cliques_of[v] {
                        if !in_dirty[c2 as usize] {
                            in_dirty[c2 as usize] = true;
                            dirty.push(c2);
                        }
                    }
                }
            }
        }
    }

    /// Depth-first search calling `emit` on each solution until it returns
    /// false. `value_order(v)` lists destination codes to try for vertex `v`.
    /// With `mrv` the next vertex is the free one with the smallest domain,
    /// ties broken by the static order.
    fn run(
        &self,
        value_order: &dyn Fn(usize) -> Vec<u32>,
        budget: u64,
        mrv: bool,
        emit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> (Termination, SearchStats) {
        let mut stats = SearchStats::default();
        let ns = self.pinned.len();
        let full: Bits = {
            let mut b = vec![!0u64; self.words];
            if !self.nd.is_multiple_of(64) {
                *b.last_mut().unwrap() = (1u64 << (self.nd % 64)) - 1;
            }
            b
        };
        let mut dom: Vec<Bits> = vec![full; ns];
        let mut assigned: Vec<Option<usize>> = self.pinned.clone();
        let mut trail: Vec<(usize, Bits)> = Vec::new();
        let mut fixed = Vec::new();
        for (v, d) in dom.iter_mut().enumerate() {
            if let Some(y) = self.pinned[v] {
                *d = vec![0; self.words];
                d[y / 64] |= 1 << (y % 64);
                fixed.push(v);
            }
        }
        // Pinned vertices count as unassigned during the first propagation
        // so clique reasoning sees them; afterwards they are fixed.
        let none = vec![None; ns];
        if !self.propagate(&mut dom, &mut trail, &none, fixed) {
            return (Termination::Exhausted, stats);
        }
        trail.clear();
        let depth_n = self.order.len();
        let mut values: Vec<Vec<u32>> = vec![Vec::new(); ns];
        for &v in &self.order {
            values[v] = value_order(v);
        }
        let mut var_at = vec![usize::MAX; depth_n + 1];
        let mut cursor = vec![0usize; depth_n + 1];
        let mut mark = vec![0usize; depth_n + 1];
        let mut depth = 0usize;
        let choose = |depth: usize, assigned: &[Option<usize>], dom: &[Bits]| -> usize {
            if !mrv {
                return self.order[depth];
            }
            if let Some((a, b)) = self.pair {
                if let Some(v) = [a, b].into_iter().find(|&v| assigned[v].is_none()) {
                    return v;
                }
            }
            let size = |v: usize| dom[v].iter().map(|w| w.count_ones()).sum::<u32>();
            *self
                .order
                .iter()
                .filter(|&&v| assigned[v].is_none())
                .min_by_key(|&&v| size(v))
                .unwrap()
        };
        if depth_n > 0 {
            var_at[0] = choose(0, &assigned, &dom);
        }
        loop {
            if depth == depth_n {
                let table: Vec<usize> = assigned.iter().map(|y| y.unwrap()).collect();
                if !emit(&table) {
                    return (Termination::Stopped, stats);
                }
                if depth == 0 {
                    return (Termination::Exhausted, stats);
                }
                depth -= 1;
                continue;
            }
            let v = var_at[depth];
            Self::undo(&mut dom, &mut trail, mark[depth]);
            assigned[v] = None;
            let vals = &values[v];
            let next = vals[cursor[depth]..].iter().position(|&y| bit(&dom[v], y as usize));
            let Some(off) = next else {
                stats.backtracks += 1;
                if depth == 0 {
                    return (Termination::Exhausted, stats);
                }
                depth -= 1;
                continue;
            };
            let y = vals[cursor[depth] + off] as usize;
            cursor[depth] += off + 1;
            if stats.nodes >= budget {
                return (Termination::Budget, stats);
            }
            stats.nodes += 1;
            let mut only = vec![0u64; self.words];
            only[y / 64] |= 1 << (y % 64);
            Self::narrow(&mut dom, &mut trail, v, &only);
            if !self.propagate(&mut dom, &mut trail, &assigned, vec![v]) {
                continue;
            }
            assigned[v] = Some(y);
            depth += 1;
            stats.max_depth = stats.max_depth.max(depth);
            cursor[depth] = 0;
            mark[depth] = trail.len();
            if depth < depth_n {
                var_at[depth] = choose(depth, &assigned, &dom);
            }
        }
    }

    fn table(&self, codes: &[usize]) -> MapTable {
        MapTable::from_codes(&self.problem.src, &self.problem.dst, codes).expect("solver codes are in range")
    }
}

/// Calls `f` on every homomorphism satisfying `p`, in search order, until
/// it returns false or the budget runs out.
pub fn for_each_hom(
    p: &SearchProblem,
    f: &mut dyn FnMut(MapTable) -> bool,
) -> Result<(Termination, SearchStats), SearchError> {
    let solver = Solver::new(p)?;
    let nd = solver.nd as u32;
    let ascending = |_: usize| (0..nd).collect::<Vec<u32>>();
    Ok(solver.run(&ascending, p.budget, true, &mut |codes| {
        let t = solver.table(codes);
        if p.accepts(&t) {
            f(t)
        } else {
            true
        }
    }))
}

/// The first homomorphism in search order, or a proof that none exists.
pub fn search_hom(p: &SearchProblem) -> Result<SearchOutcome, SearchError> {
    let mut found = None;
    let (term, stats) = for_each_hom(p, &mut |t| {
        found = Some(t);
        false
    })?;
    Ok(match (found, term) {
        (Some(t), _) => SearchOutcome::Found(t, stats),
        (None, Termination::Budget) => SearchOutcome::BudgetExceeded(stats),
        (None, _) => SearchOutcome::Unsat(stats),
    })
}

/// Up to `limit` homomorphisms in search order.
pub fn enumerate_homs(p: &SearchProblem, limit: usize) -> Result<Enumeration, SearchError> {
    let mut tables = Vec::new();
    if limit == 0 {
        Solver::new(p)?;
        return Ok(Enumeration {
            tables,
            termination: Termination::Stopped,
            stats: SearchStats::default(),
        });
    }
    let (termination, stats) = for_each_hom(p, &mut |t| {
        tables.push(t);
        tables.len() < limit
    })?;
    Ok(Enumeration {
        tables,
        termination,
        stats,
    })
}

/// Random restarts, each with its own value order, collecting up to `count`
/// distinct homomorphisms. Each restart gets the problem's budget.
pub fn sample_homs(p: &SearchProblem, count: usize, seed: u64) -> Result<Vec<MapTable>, SearchError> {
    sample_homs_with(p, count, seed, count.saturating_mul(20).max(1))
}

/// [`sample_homs`] with an explicit restart cap.
pub fn sample_homs_with(
    p: &SearchProblem,
    count: usize,
    seed: u64,
    restarts: usize,
) -> Result<Vec<MapTable>, SearchError> {
    sample(p, count, seed, restarts, true)
}

/// One homomorphism per successful restart, repeats included, until `count`
/// draws or `restarts` restarts.
pub fn draw_homs(p: &SearchProblem, count: usize, seed: u64, restarts: usize) -> Result<Vec<MapTable>, SearchError> {
    sample(p, count, seed, restarts, false)
}

fn sample(
    p: &SearchProblem,
    count: usize,
    seed: u64,
    restarts: usize,
    distinct: bool,
) -> Result<Vec<MapTable>, SearchError> {
    let solver = Solver::new(p)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in 0..restarts {
        if out.len() >= count {
            break;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (r as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let orders: Vec<Vec<u32>> = (0..solver.pinned.len())
            .map(|_| {
                let mut v: Vec<u32> = (0..solver.nd as u32).collect();
                v.shuffle(&mut rng);
                v
            })
            .collect();
        let mut found = None;
        let (term, _) = solver.run(&|v| orders[v].clone(), p.budget, true, &mut |codes| {
            let t = solver.table(codes);
            if p.accepts(&t) {
                found = Some((codes.to_vec(), t));
                false
            } else {
                true
            }
        });
        match found {
            Some((codes, t)) => {
                if !distinct || seen.insert(codes) {
                    out.push(t);
                }
            }
            None if term == Termination::Exhausted => break,
            None => {}
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_graph_hom;
    use crate::fields::Field;

    fn space(q: u64, m: usize, n: usize) -> MatrixSpace {
        MatrixSpace::new(&Field::standard(q).unwrap(), m, n)
    }

    fn problem(a: u64, b: u64) -> SearchProblem {
        SearchProblem::new(&space(a, 2, 2), &space(b, 2, 2)).unwrap()
    }

    #[test]
    fn fully_pinned_identity_is_found() {
        let s = space(2, 2, 2);
        let mut p = problem(2, 2);
        for x in s.iter() {
            p.pin(x.clone(), x).unwrap();
        }
        match search_hom(&p).unwrap() {
            SearchOutcome::Found(t, stats) => {
                assert_eq!(t, MapTable::identity(&s));
                assert_eq!(stats.nodes, 0);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(enumerate_homs(&p, 10).unwrap().tables.len(), 1);
    }

    #[test]
    fn inconsistent_pins_rejected() {
        let s = space(2, 2, 2);
        let p = problem(2, 2).with_pin(s.zero(), s.zero()).unwrap();
        assert!(matches!(
            p.with_pin(s.unit(0, 0), s.diag_ones(2)),
            Err(SearchError::InvalidProblem(_))
        ));
    }

    #[test]
    fn budget_one() {
        let p = problem(2, 2).with_budget(1);
        match search_hom(&p).unwrap() {
            SearchOutcome::BudgetExceeded(s) => assert_eq!(s.nodes, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn enumerate_with_zero_pinned() {
        let c = Constraints {
            fix_zero_to_zero: true,
            ..Default::default()
        };
        let p = problem(2, 2).with_constraints(c);
        let e = enumerate_homs(&p, 10).unwrap();
        assert_eq!(e.tables.len(), 10);
        let z = space(2, 2, 2).zero();
        for t in &e.tables {
            assert!(is_graph_hom(t).is_ok());
            assert_eq!(t.image(&z), &z);
        }
        assert!(enumerate_homs(&p, 0).unwrap().tables.is_empty());
    }

    #[test]
    fn colouring_bound_unsat_and_inversion_found() {
        let c = Constraints {
            fix_zero_to_zero: true,
            require_distance2_image_pair: true,
            symmetry_reduction: true,
            ..Default::default()
        };
        let p = problem(3, 2).with_constraints(c);
        assert!(matches!(search_hom(&p).unwrap(), SearchOutcome::Unsat(_)));
        let p = problem(2, 3).with_constraints(c);
        match search_hom(&p).unwrap() {
            SearchOutcome::Found(t, _) => {
                assert!(is_graph_hom(&t).is_ok());
                assert!(has_distance2_pair(&t));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn symmetry_reduction_agrees_with_post_filter() {
        let on = Constraints {
            fix_zero_to_zero: true,
            require_distance2_image_pair: true,
            symmetry_reduction: true,
            ..Default::default()
        };
        let off = Constraints {
            symmetry_reduction: false,
            ..on
        };
        for (a, b) in [(2, 2), (2, 3)] {
            let x = search_hom(&problem(a, b).with_constraints(on)).unwrap();
            let y = search_hom(&problem(a, b).with_constraints(off)).unwrap();
            assert_eq!(x.name(), y.name());
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let c = Constraints {
            fix_zero_to_zero: true,
            ..Default::default()
        };
        let p = problem(2, 2).with_constraints(c);
        let a = sample_homs(&p, 5, 7).unwrap();
        assert_eq!(a, sample_homs(&p, 5, 7).unwrap());
        assert_eq!(a.len(), 5);
        assert!(a.iter().all(|t| is_graph_hom(t).is_ok()));
        let one = sample_homs(&p, 1, 3).unwrap();
        assert_eq!(one.len(), 1);
        let unsat = problem(3, 2).with_constraints(Constraints {
            require_distance2_image_pair: true,
            symmetry_reduction: true,
            ..c
        });
        assert!(sample_homs(&unsat, 3, 1).unwrap().is_empty());
    }

    #[test]
    fn problem_text_round_trip() {
        let s = space(2, 2, 2);
        let mut p = problem(2, 2).with_budget(99).with_seed(5);
        p.constraints.fix_zero_to_zero = true;
        p.pin(s.unit(0, 0), s.unit(0, 1)).unwrap();
        let text = p.to_text();
        assert_eq!(SearchProblem::parse(&text).unwrap(), p);
        assert!(SearchProblem::parse(&text.replace("fix_zero_to_zero", "nope")).is_err());
    }
}
