//! Backtracking search: a synthesizer for small base sets, a header+gadget
//! scheme that scales two base families to every odd prime, and an
//! exhaustive oracle that can *prove* nonexistence on small groups.
//!
//! The synthesizer's `NotFound` is never evidence of nonexistence — budgets
//! are heuristic. Only [`prove_nonexistence`], which enumerates all
//! row/column-sum candidates and exhausts a symmetry-reduced arrangement
//! space, may claim that no set exists.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::abelian::{Element, Group};
use crate::cache::Cache;
use crate::model::{HoleSpec, RectArray, RectSet};
use crate::{Error, Result};

/// Default node budget for a single synthesize call.
pub const DEFAULT_MAX_NODES: u64 = 20_000_000;

/// Default group-order cap for the exhaustive nonexistence oracle.
pub const DEFAULT_EXHAUSTIVE_CAP: u64 = 24;

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: DEFAULT_MAX_NODES, time_limit: None }
    }
}

/// A fully specified search instance. `a·b·c` must equal the group order
/// minus the hole size.
#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub group: Group,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub hole: Option<HoleSpec>,
    /// Require all row and column sums to be zero.
    pub zero_sum: bool,
    /// Required row sum (ignored when `zero_sum`).
    pub gamma: Option<Element>,
    /// Required column sum (ignored when `zero_sum`).
    pub delta: Option<Element>,
    /// Rows pinned at the top of the first array (disables symmetry
    /// breaking).
    pub fixed_rows: Vec<Vec<Element>>,
    pub budget: SearchBudget,
}

impl SearchProblem {
    /// A zero-sum instance with no hole and default budget.
    pub fn zero_sum(group: Group, a: usize, b: usize, c: usize) -> SearchProblem {
        SearchProblem {
            group,
            a,
            b,
            c,
            hole: None,
            zero_sum: true,
            gamma: None,
            delta: None,
            fixed_rows: Vec::new(),
            budget: SearchBudget::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(Box<RectSet>),
    /// The (symmetry-reduced) space contains no solution.
    Exhausted { nodes: u64 },
    /// Budget ran out before the space was exhausted; inconclusive.
    BudgetExceeded { nodes: u64 },
}

impl SearchOutcome {
    pub fn found(self) -> Option<RectSet> {
        match self {
            SearchOutcome::Found(s) => Some(*s),
            _ => None,
        }
    }
}

/// Searches for a rectangle set matching the problem. Deterministic: cells
/// are filled row-major, arrays in sequence, candidate values in
/// lexicographic coordinate order, so identical problems yield identical
/// outcomes.
pub fn synthesize(problem: &SearchProblem) -> Result<SearchOutcome> {
    let mut searcher = GroupSearcher::new(problem, false)?;
    searcher.run()
}

// ---------------------------------------------------------------------------
// Group-valued backtracker
// ---------------------------------------------------------------------------

struct GroupSearcher {
    group: Group,
    a: usize,
    b: usize,
    c: usize,
    hole: Option<HoleSpec>,
    zero_sum: bool,
    universe: Vec<Element>,
    index_of: HashMap<Element, usize>,
    used: Vec<bool>,
    /// Universe index per cell, in fill order.
    cells: Vec<usize>,
    fixed_cells: usize,
    gamma: Option<Element>,
    delta: Option<Element>,
    /// Running sums: one per global row, one per (array, column).
    row_acc: Vec<Element>,
    col_acc: Vec<Element>,
    pin_first_zero: bool,
    canonical: bool,
    nodes: u64,
    budget: SearchBudget,
    started: Instant,
    budget_hit: bool,
}

impl GroupSearcher {
    fn new(problem: &SearchProblem, pin_first_zero: bool) -> Result<GroupSearcher> {
        let g = &problem.group;
        let hole_elems = match &problem.hole {
            Some(h) => h.elements(crate::abelian::DEFAULT_ENUM_CAP)?,
            None => Default::default(),
        };
        if g.order() > crate::abelian::DEFAULT_ENUM_CAP {
            return Err(Error::CapExceeded {
                needed: g.order(),
                cap: crate::abelian::DEFAULT_ENUM_CAP,
            });
        }
        let mut universe: Vec<Element> =
            g.elements().filter(|e| !hole_elems.contains(e)).collect();
        universe.sort();
        let cell_count = problem
            .a
            .checked_mul(problem.b)
            .and_then(|ab| ab.checked_mul(problem.c))
            .ok_or_else(|| Error::invalid("a*b*c overflows"))?;
        if cell_count != universe.len() {
            return Err(Error::invalid(format!(
                "a*b*c = {cell_count} cells but {} elements to place",
                universe.len()
            )));
        }
        let (gamma, delta) = if problem.zero_sum {
            (Some(g.zero()), Some(g.zero()))
        } else {
            (problem.gamma.clone(), problem.delta.clone())
        };
        for e in gamma.iter().chain(delta.iter()) {
            if !g.contains(e) {
                return Err(Error::invalid(format!("required sum {e:?} is not in {g}")));
            }
        }
        if problem.hole.is_some() && gamma.is_none() {
            return Err(Error::invalid(
                "searching with a hole requires zero_sum or explicit sums",
            ));
        }
        let index_of: HashMap<Element, usize> =
            universe.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut s = GroupSearcher {
            a: problem.a,
            b: problem.b,
            c: problem.c,
            hole: problem.hole.clone(),
            zero_sum: problem.zero_sum,
            used: vec![false; universe.len()],
            cells: Vec::with_capacity(cell_count),
            fixed_cells: 0,
            gamma,
            delta,
            row_acc: vec![g.zero(); problem.a * problem.c],
            col_acc: vec![g.zero(); problem.b * problem.c],
            pin_first_zero,
            canonical: problem.fixed_rows.is_empty(),
            nodes: 0,
            budget: problem.budget,
            started: Instant::now(),
            budget_hit: false,
            index_of,
            universe,
            group: g.clone(),
        };
        s.pin_rows(&problem.fixed_rows)?;
        Ok(s)
    }

    fn pin_rows(&mut self, rows: &[Vec<Element>]) -> Result<()> {
        if rows.is_empty() {
            return Ok(());
        }
        if rows.len() > self.a {
            return Err(Error::invalid("more fixed rows than rows per array"));
        }
        for row in rows {
            if row.len() != self.b {
                return Err(Error::invalid("fixed row has wrong width"));
            }
            for e in row {
                let &idx = self
                    .index_of
                    .get(e)
                    .ok_or_else(|| Error::invalid(format!("fixed entry {e:?} not placeable")))?;
                if self.used[idx] {
                    return Err(Error::invalid(format!("fixed entry {e:?} repeated")));
                }
                self.used[idx] = true;
                self.push_sums(self.cells.len(), idx);
                self.cells.push(idx);
            }
        }
        self.fixed_cells = self.cells.len();
        // Learn sums any completed fixed row/column implies.
        for (r, row) in rows.iter().enumerate() {
            let sum = row.iter().fold(self.group.zero(), |acc, e| self.group.add(&acc, e));
            if r == 0 && self.gamma.is_none() {
                self.gamma = Some(sum);
            } else if let Some(g) = &self.gamma {
                if &sum != g {
                    return Err(Error::invalid("fixed rows disagree on the row sum"));
                }
            }
        }
        Ok(())
    }

    fn cell_pos(&self, cell: usize) -> (usize, usize, usize) {
        let per = self.a * self.b;
        (cell / per, (cell % per) / self.b, cell % self.b)
    }

    fn push_sums(&mut self, cell: usize, idx: usize) {
        let (s, r, j) = self.cell_pos(cell);
        let e = self.universe[idx].clone();
        self.row_acc[s * self.a + r] = self.group.add(&self.row_acc[s * self.a + r], &e);
        self.col_acc[s * self.b + j] = self.group.add(&self.col_acc[s * self.b + j], &e);
    }

    fn pop_sums(&mut self, cell: usize, idx: usize) {
        let (s, r, j) = self.cell_pos(cell);
        let e = &self.universe[idx];
        self.row_acc[s * self.a + r] = self.group.sub(&self.row_acc[s * self.a + r], e);
        self.col_acc[s * self.b + j] = self.group.sub(&self.col_acc[s * self.b + j], e);
    }

    /// Smallest permitted universe index at this cell under the canonical
    /// arrangement (array corners increasing; per array, the corner is the
    /// minimum, row 0 increases left to right, column 0 increases top to
    /// bottom). Sound because row, column, and array permutations preserve
    /// every constraint, and each orbit contains exactly such a form.
    fn lower_bound(&self, cell: usize) -> usize {
        if !self.canonical {
            return 0;
        }
        let (s, r, j) = self.cell_pos(cell);
        let per = self.a * self.b;
        let corner = |arr: usize| self.cells[arr * per];
        match (r, j) {
            (0, 0) => {
                if s == 0 {
                    0
                } else {
                    corner(s - 1) + 1
                }
            }
            (0, _) => self.cells[cell - 1] + 1,
            (_, 0) => {
                if r == 1 {
                    corner(s) + 1
                } else {
                    self.cells[cell - self.b] + 1
                }
            }
            _ => corner(s) + 1,
        }
    }

    /// Exact value this cell must take, if it closes a row or column whose
    /// sum is already determined. `Err(())` signals an unsatisfiable clash.
    fn forced_value(&self, cell: usize) -> std::result::Result<Option<Element>, ()> {
        let (s, r, j) = self.cell_pos(cell);
        let row_need = match (&self.gamma, j == self.b - 1) {
            (Some(g), true) => Some(self.group.sub(g, &self.row_acc[s * self.a + r])),
            _ => None,
        };
        let col_need = match (&self.delta, r == self.a - 1) {
            (Some(d), true) => Some(self.group.sub(d, &self.col_acc[s * self.b + j])),
            _ => None,
        };
        match (row_need, col_need) {
            (Some(x), Some(y)) if x != y => Err(()),
            (Some(x), _) => Ok(Some(x)),
            (None, y) => Ok(y),
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.budget.max_nodes {
            self.budget_hit = true;
            return true;
        }
        if self.nodes % 4096 == 0 {
            if let Some(limit) = self.budget.time_limit {
                if self.started.elapsed() >= limit {
                    self.budget_hit = true;
                    return true;
                }
            }
        }
        false
    }

    fn run(&mut self) -> Result<SearchOutcome> {
        let found = self.descend()?;
        if found {
            let set = self.assemble();
            let report = if self.zero_sum { set.verify_star() } else { set.verify() };
            if !report.ok {
                return Err(Error::VerifyGate(format!(
                    "synthesized set failed verification: {}",
                    report.failures[0]
                )));
            }
            return Ok(SearchOutcome::Found(Box::new(set)));
        }
        if self.budget_hit {
            Ok(SearchOutcome::BudgetExceeded { nodes: self.nodes })
        } else {
            Ok(SearchOutcome::Exhausted { nodes: self.nodes })
        }
    }

    fn descend(&mut self) -> Result<bool> {
        let cell = self.cells.len();
        if cell == self.universe.len() {
            return Ok(true);
        }
        if self.out_of_budget() {
            return Ok(false);
        }
        let lower = self.lower_bound(cell);
        let forced = match self.forced_value(cell) {
            Ok(f) => f,
            Err(()) => return Ok(false),
        };
        let candidates: Vec<usize> = match forced {
            Some(v) => match self.index_of.get(&v) {
                Some(&idx) if !self.used[idx] && idx >= lower => vec![idx],
                _ => vec![],
            },
            None => {
                if self.pin_first_zero && cell == 0 {
                    let zero = self.group.zero();
                    match self.index_of.get(&zero) {
                        Some(&idx) if !self.used[idx] => vec![idx],
                        _ => vec![],
                    }
                } else {
                    (lower..self.universe.len()).filter(|&i| !self.used[i]).collect()
                }
            }
        };
        for idx in candidates {
            self.nodes += 1;
            self.used[idx] = true;
            self.push_sums(cell, idx);
            self.cells.push(idx);
            // In free mode, a completed first row/column fixes the sums.
            let (s, r, j) = self.cell_pos(cell);
            let mut learned_gamma = false;
            let mut learned_delta = false;
            if self.gamma.is_none() && (s, r, j) == (0, 0, self.b - 1) {
                self.gamma = Some(self.row_acc[0].clone());
                learned_gamma = true;
            }
            if self.delta.is_none() && (s, r, j) == (0, self.a - 1, 0) {
                self.delta = Some(self.col_acc[0].clone());
                learned_delta = true;
            }
            if self.descend()? {
                return Ok(true);
            }
            if learned_gamma {
                self.gamma = None;
            }
            if learned_delta {
                self.delta = None;
            }
            self.cells.pop();
            self.pop_sums(cell, idx);
            self.used[idx] = false;
            if self.budget_hit {
                break;
            }
        }
        Ok(false)
    }

    fn assemble(&self) -> RectSet {
        let per = self.a * self.b;
        let arrays = (0..self.c)
            .map(|s| RectArray {
                rows: self.a,
                cols: self.b,
                entries: self.cells[s * per..(s + 1) * per]
                    .iter()
                    .map(|&i| self.universe[i].clone())
                    .collect(),
            })
            .collect();
        RectSet {
            group: self.group.clone(),
            a: self.a,
            b: self.b,
            c: self.c,
            gamma: self.gamma.clone().expect("sums are known once any row completed"),
            delta: self.delta.clone().expect("sums are known once any column completed"),
            hole: self.hole.clone(),
            arrays,
        }
    }
}

// ---------------------------------------------------------------------------
// Nonexistence oracle
// ---------------------------------------------------------------------------

/// Outcome of the exhaustive oracle.
#[derive(Clone, Debug)]
pub struct NonexistenceReport {
    pub nonexistent: bool,
    /// A verified set when one exists.
    pub witness: Option<RectSet>,
    pub nodes: u64,
}

/// Exhaustively decides whether any `MRS_g(a, b; c)` exists, for small
/// groups (`|g| ≤ cap`).
///
/// Every candidate `(gamma, delta)` consistent with the counting identities
/// `a·gamma = b·delta` (both equal one array's total) and
/// `c·a·gamma = Σ_g` (all arrays together cover the group) is searched with
/// the first entry pinned to 0 — sound because translating every entry by a
/// constant maps magic sets to magic sets while staying inside the
/// candidate family. Returns a verified witness when one exists; `true`
/// means proven nonexistence.
pub fn prove_nonexistence(
    group: &Group,
    a: usize,
    b: usize,
    c: usize,
    cap: u64,
) -> Result<NonexistenceReport> {
    if a < 2 || b < 2 {
        return Err(Error::invalid("the oracle requires a, b > 1"));
    }
    if group.order() > cap {
        return Err(Error::CapExceeded { needed: group.order(), cap });
    }
    let cells = a
        .checked_mul(b)
        .and_then(|ab| ab.checked_mul(c))
        .ok_or_else(|| Error::invalid("a*b*c overflows"))?;
    if cells as u64 != group.order() {
        return Err(Error::invalid(format!(
            "a*b*c = {cells} does not match group order {}",
            group.order()
        )));
    }
    let total: Element = group.sum_of_all();
    let all: Vec<Element> = group.elements().collect();
    let mut nodes = 0u64;
    for gamma in &all {
        if group.scalar_mul((c * a) as i64, gamma) != total {
            continue;
        }
        let array_total = group.scalar_mul(a as i64, gamma);
        for delta in &all {
            if group.scalar_mul(b as i64, delta) != array_total {
                continue;
            }
            let problem = SearchProblem {
                group: group.clone(),
                a,
                b,
                c,
                hole: None,
                zero_sum: false,
                gamma: Some(gamma.clone()),
                delta: Some(delta.clone()),
                fixed_rows: Vec::new(),
                budget: SearchBudget { max_nodes: 200_000_000, time_limit: None },
            };
            let mut searcher = GroupSearcher::new(&problem, true)?;
            match searcher.run()? {
                SearchOutcome::Found(set) => {
                    return Ok(NonexistenceReport {
                        nonexistent: false,
                        witness: Some(*set),
                        nodes: nodes + searcher.nodes,
                    });
                }
                SearchOutcome::Exhausted { nodes: n } => nodes += n,
                SearchOutcome::BudgetExceeded { nodes: n } => {
                    return Err(Error::Budget {
                        nodes: nodes + n,
                        hint: Some("nonexistence proof needs a larger budget".to_string()),
                    });
                }
            }
        }
    }
    Ok(NonexistenceReport { nonexistent: true, witness: None, nodes })
}

// ---------------------------------------------------------------------------
// Scalable bases: header + gadget
// ---------------------------------------------------------------------------

/// The two base families that must exist for every odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BaseKind {
    /// One array over `Z_p⊕Z_2⊕Z_2`, type `(p,4;1)`.
    P22,
    /// Two arrays over `Z_p⊕(Z_2)^3`, type `(p,4;2)`.
    P222,
}

impl fmt::Display for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseKind::P22 => "p22",
            BaseKind::P222 => "p222",
        })
    }
}

impl BaseKind {
    fn t_factors(self) -> &'static [u64] {
        match self {
            BaseKind::P22 => &[2, 2],
            BaseKind::P222 => &[2, 2, 2],
        }
    }

    fn array_count(self) -> usize {
        match self {
            BaseKind::P22 => 1,
            BaseKind::P222 => 2,
        }
    }
}

/// Symbolic cells: `(k, t)` denotes first coordinate `k` (header: a literal
/// value in `[-h, h]`; gadget: a sign multiplying the pair symbol `x`) and
/// 2-group part `t`. Indexed `[array][row][col]`.
type SymbolBlocks = Vec<Vec<Vec<(i64, Vec<u64>)>>>;

/// A reusable two-row filler over `{x, −x} × T`, instantiable at any pair
/// `{x, −x}` of nonzero opposite residues.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GadgetTemplate {
    pub blocks: SymbolBlocks,
}

impl GadgetTemplate {
    fn builtin(kind: BaseKind) -> GadgetTemplate {
        let block = |prefix: &[u64]| -> Vec<Vec<(i64, Vec<u64>)>> {
            let t = |rest: [u64; 2]| {
                let mut v = prefix.to_vec();
                v.extend(rest);
                v
            };
            vec![
                vec![(1, t([0, 0])), (-1, t([0, 1])), (1, t([1, 1])), (-1, t([1, 0]))],
                vec![(-1, t([0, 0])), (1, t([0, 1])), (-1, t([1, 1])), (1, t([1, 0]))],
            ]
        };
        let blocks = match kind {
            BaseKind::P22 => vec![block(&[])],
            BaseKind::P222 => vec![block(&[0]), block(&[1])],
        };
        GadgetTemplate { blocks }
    }

    /// Checks the template invariant: across all blocks, each `(sign, t)`
    /// pair occurs exactly once, every row's signs and `t`-parts cancel,
    /// and every two-cell column cancels.
    fn is_valid(&self, kind: BaseKind) -> bool {
        let t_group = Group::new(kind.t_factors().to_vec()).expect("fixed moduli");
        if self.blocks.len() != kind.array_count() {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for block in &self.blocks {
            if block.len() != 2 || block.iter().any(|row| row.len() != 4) {
                return false;
            }
            for row in block {
                let mut sign_sum = 0i64;
                let mut t_sum = t_group.zero();
                for (sign, t) in row {
                    if *sign != 1 && *sign != -1 {
                        return false;
                    }
                    let te = Element::from_coords(t.clone());
                    if !t_group.contains(&te) {
                        return false;
                    }
                    if !seen.insert((*sign, t.clone())) {
                        return false;
                    }
                    sign_sum += sign;
                    t_sum = t_group.add(&t_sum, &te);
                }
                if sign_sum != 0 || !t_sum.is_zero() {
                    return false;
                }
            }
            for j in 0..4 {
                let (s1, t1) = &block[0][j];
                let (s2, t2) = &block[1][j];
                let col_t = t_group.add(
                    &Element::from_coords(t1.clone()),
                    &Element::from_coords(t2.clone()),
                );
                if s1 + s2 != 0 || !col_t.is_zero() {
                    return false;
                }
            }
        }
        seen.len() as u64 == 2 * t_group.order()
    }
}

/// The header block for one ladder rung: `reach = h` means first
/// coordinates range over `[-h, h]` and each array carries `2h+1` rows.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct HeaderBlock {
    reach: i64,
    blocks: SymbolBlocks,
}

impl HeaderBlock {
    /// Coverage of `[-h,h] × T` exactly once across all arrays; every row
    /// and every column sums to integer zero in the first coordinate and to
    /// zero in `T`. Integer-zero sums make the block valid in `Z_p` for
    /// every odd `p ≥ 2h+1` at once.
    fn is_valid(&self, kind: BaseKind) -> bool {
        let t_group = Group::new(kind.t_factors().to_vec()).expect("fixed moduli");
        let h = self.reach;
        let rows = (2 * h + 1) as usize;
        if self.blocks.len() != kind.array_count() {
            return false;
        }
        let mut seen = std::collections::HashSet::new();
        for block in &self.blocks {
            if block.len() != rows || block.iter().any(|row| row.len() != 4) {
                return false;
            }
            for row in block {
                let mut v_sum = 0i64;
                let mut t_sum = t_group.zero();
                for (v, t) in row {
                    if *v < -h || *v > h {
                        return false;
                    }
                    let te = Element::from_coords(t.clone());
                    if !t_group.contains(&te) {
                        return false;
                    }
                    if !seen.insert((*v, t.clone())) {
                        return false;
                    }
                    v_sum += v;
                    t_sum = t_group.add(&t_sum, &te);
                }
                if v_sum != 0 || !t_sum.is_zero() {
                    return false;
                }
            }
            for j in 0..4 {
                let mut v_sum = 0i64;
                let mut t_sum = t_group.zero();
                for row in block {
                    let (v, t) = &row[j];
                    v_sum += v;
                    t_sum = t_group.add(&t_sum, &Element::from_coords(t.clone()));
                }
                if v_sum != 0 || !t_sum.is_zero() {
                    return false;
                }
            }
        }
        seen.len() as u64 == (2 * h + 1) as u64 * t_group.order()
    }
}

/// Cached outcome of one header search rung.
#[derive(Clone, Debug, Serialize, Deserialize)]
enum HeaderCacheEntry {
    Found { header: HeaderBlock, gadget: GadgetTemplate },
    Exhausted { nodes: u64 },
    Budget { nodes: u64 },
}

/// Builds the `(p,4;·)` base of the given kind for any odd `p ≥ 3`.
///
/// Strategy: find (once, cached) a header block of reach `h` — trying
/// `h = 1, 2, 3` — whose integer-zero sums make it valid over every prime,
/// then extend with one gadget block per pair `{x, −x}`,
/// `x = h+1, …, (p−1)/2`. If no rung fits (`2h+1 ≤ p`) or none yields a
/// header, falls back to a direct search over `Z_p⊕T`.
pub fn synthesize_scalable_base(kind: BaseKind, p: u64, cache: &Cache) -> Result<RectSet> {
    synthesize_scalable_base_with(kind, p, cache, SearchBudget::default())
}

pub fn synthesize_scalable_base_with(
    kind: BaseKind,
    p: u64,
    cache: &Cache,
    budget: SearchBudget,
) -> Result<RectSet> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::invalid(format!("base kind {kind} needs odd p >= 3, got {p}")));
    }
    let gadget = GadgetTemplate::builtin(kind);
    debug_assert!(gadget.is_valid(kind));
    for h in 1..=3i64 {
        if 2 * h + 1 > p as i64 {
            break;
        }
        match header_for(kind, h, cache, budget)? {
            Some(header) => {
                let set = assemble_base(kind, p, &header, &gadget);
                let report = set.verify_star();
                if !report.ok {
                    return Err(Error::VerifyGate(format!(
                        "assembled {kind} base failed verification at p = {p}: {}",
                        report.failures[0]
                    )));
                }
                return Ok(set);
            }
            None => continue,
        }
    }
    // No usable header: search the whole set directly (small p only).
    let mut factors = vec![p];
    factors.extend_from_slice(kind.t_factors());
    let group = Group::new(factors)?;
    let c = (group.order() / (4 * p)) as usize;
    let mut problem = SearchProblem::zero_sum(group, p as usize, 4, c);
    problem.budget = budget;
    match synthesize(&problem)? {
        SearchOutcome::Found(set) => Ok(*set),
        SearchOutcome::Exhausted { nodes } | SearchOutcome::BudgetExceeded { nodes } => {
            Err(Error::Budget {
                nodes,
                hint: Some(format!("no {kind} base found for p = {p}")),
            })
        }
    }
}

/// Loads or searches the header for one rung. `Ok(None)` means this rung is
/// settled as unusable (exhausted, or over budget).
fn header_for(
    kind: BaseKind,
    h: i64,
    cache: &Cache,
    budget: SearchBudget,
) -> Result<Option<HeaderBlock>> {
    let key = format!("base-{kind}-h{h}");
    if let Some(entry) = cache.load::<HeaderCacheEntry>(&key) {
        match entry {
            HeaderCacheEntry::Found { header, gadget }
                if header.reach == h && header.is_valid(kind) && gadget.is_valid(kind) =>
            {
                return Ok(Some(header));
            }
            HeaderCacheEntry::Exhausted { .. } => return Ok(None),
            HeaderCacheEntry::Budget { nodes } if nodes >= budget.max_nodes => {
                return Ok(None);
            }
            _ => {} // invalid or underpowered entry: redo the search
        }
    }
    let (outcome, entry) = match search_header(kind, h, budget) {
        HeaderOutcome::Found(header) => {
            let gadget = GadgetTemplate::builtin(kind);
            (
                Some(header.clone()),
                HeaderCacheEntry::Found { header, gadget },
            )
        }
        HeaderOutcome::Exhausted { nodes } => (None, HeaderCacheEntry::Exhausted { nodes }),
        HeaderOutcome::Budget { nodes } => (None, HeaderCacheEntry::Budget { nodes }),
    };
    let _ = cache.store(&key, &entry);
    Ok(outcome)
}

fn assemble_base(kind: BaseKind, p: u64, header: &HeaderBlock, gadget: &GadgetTemplate) -> RectSet {
    let mut factors = vec![p];
    factors.extend_from_slice(kind.t_factors());
    let group = Group::new(factors).expect("valid moduli");
    let to_elem = |first: i64, t: &[u64]| {
        let mut coords = vec![first];
        coords.extend(t.iter().map(|&v| v as i64));
        group.element(&coords)
    };
    let arrays: Vec<RectArray> = (0..kind.array_count())
        .map(|i| {
            let mut rows: Vec<Vec<Element>> = header.blocks[i]
                .iter()
                .map(|row| row.iter().map(|(v, t)| to_elem(*v, t)).collect())
                .collect();
            for x in (header.reach + 1)..=(p as i64 - 1) / 2 {
                for row in &gadget.blocks[i] {
                    rows.push(row.iter().map(|(sign, t)| to_elem(sign * x, t)).collect());
                }
            }
            RectArray::from_rows(rows).expect("blocks are rectangular")
        })
        .collect();
    RectSet {
        gamma: group.zero(),
        delta: group.zero(),
        a: p as usize,
        b: 4,
        c: arrays.len(),
        hole: None,
        arrays,
        group,
    }
}

// ---------------------------------------------------------------------------
// Header search: integer first coordinate with exact zero sums
// ---------------------------------------------------------------------------

enum HeaderOutcome {
    Found(HeaderBlock),
    Exhausted { nodes: u64 },
    Budget { nodes: u64 },
}

struct HeaderSearcher {
    h: i64,
    rows: usize,
    t_group: Group,
    /// All `(v, t)` symbols, sorted by `(v, t)`.
    values: Vec<(i64, Element)>,
    used: Vec<bool>,
    cells: Vec<usize>,
    /// Integer and T-part accumulators per (array, row) and (array, col).
    row_v: Vec<i64>,
    row_t: Vec<Element>,
    col_v: Vec<i64>,
    col_t: Vec<Element>,
    nodes: u64,
    budget: SearchBudget,
    started: Instant,
    budget_hit: bool,
}

fn search_header(kind: BaseKind, h: i64, budget: SearchBudget) -> HeaderOutcome {
    let t_group = Group::new(kind.t_factors().to_vec()).expect("fixed moduli");
    let mut values = Vec::new();
    for v in -h..=h {
        for t in t_group.elements() {
            values.push((v, t));
        }
    }
    values.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let rows = (2 * h + 1) as usize;
    let arrays = kind.array_count();
    let mut s = HeaderSearcher {
        h,
        rows,
        used: vec![false; values.len()],
        cells: Vec::with_capacity(values.len()),
        row_v: vec![0; arrays * rows],
        row_t: vec![t_group.zero(); arrays * rows],
        col_v: vec![0; arrays * 4],
        col_t: vec![t_group.zero(); arrays * 4],
        nodes: 0,
        budget,
        started: Instant::now(),
        budget_hit: false,
        values,
        t_group,
    };
    if s.descend() {
        let per = s.rows * 4;
        let blocks = (0..arrays)
            .map(|i| {
                (0..s.rows)
                    .map(|r| {
                        (0..4)
                            .map(|j| {
                                let (v, t) = &s.values[s.cells[i * per + r * 4 + j]];
                                (*v, t.coords().to_vec())
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        HeaderOutcome::Found(HeaderBlock { reach: h, blocks })
    } else if s.budget_hit {
        HeaderOutcome::Budget { nodes: s.nodes }
    } else {
        HeaderOutcome::Exhausted { nodes: s.nodes }
    }
}

impl HeaderSearcher {
    fn cell_pos(&self, cell: usize) -> (usize, usize, usize) {
        let per = self.rows * 4;
        (cell / per, (cell % per) / 4, cell % 4)
    }

    fn lower_bound(&self, cell: usize) -> usize {
        let (s, r, j) = self.cell_pos(cell);
        let per = self.rows * 4;
        let corner = |arr: usize| self.cells[arr * per];
        match (r, j) {
            (0, 0) => {
                if s == 0 {
                    0
                } else {
                    corner(s - 1) + 1
                }
            }
            (0, _) => self.cells[cell - 1] + 1,
            (_, 0) => {
                if r == 1 {
                    corner(s) + 1
                } else {
                    self.cells[cell - 4] + 1
                }
            }
            _ => corner(s) + 1,
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.budget.max_nodes {
            self.budget_hit = true;
            return true;
        }
        if self.nodes % 4096 == 0 {
            if let Some(limit) = self.budget.time_limit {
                if self.started.elapsed() >= limit {
                    self.budget_hit = true;
                    return true;
                }
            }
        }
        false
    }

    fn descend(&mut self) -> bool {
        let cell = self.cells.len();
        if cell == self.values.len() {
            return true;
        }
        if self.out_of_budget() {
            return false;
        }
        let (s, r, j) = self.cell_pos(cell);
        let (ri, ci) = (s * self.rows + r, s * 4 + j);
        let lower = self.lower_bound(cell);

        // Forced final cells: rows need exact cancellation, columns too.
        let row_force = (j == 3).then(|| (-self.row_v[ri], self.t_group.neg(&self.row_t[ri])));
        let col_force =
            (r == self.rows - 1).then(|| (-self.col_v[ci], self.t_group.neg(&self.col_t[ci])));
        let forced = match (row_force, col_force) {
            (Some(a), Some(b)) => {
                if a != b {
                    return false;
                }
                Some(a)
            }
            (Some(a), None) => Some(a),
            (None, b) => b,
        };

        let candidate_ok = |this: &Self, idx: usize| -> bool {
            let (v, _) = &this.values[idx];
            // Remaining cells in this row/column must be able to cancel v.
            let cells_left_in_row = (3 - j) as i64;
            if (this.row_v[ri] + v).abs() > this.h * cells_left_in_row {
                return false;
            }
            let rows_left_in_col = (this.rows - 1 - r) as i64;
            (this.col_v[ci] + v).abs() <= this.h * rows_left_in_col
        };

        let candidates: Vec<usize> = match forced {
            Some((v, t)) => match self
                .values
                .binary_search_by(|probe| probe.0.cmp(&v).then(probe.1.cmp(&t)))
            {
                Ok(idx) if !self.used[idx] && idx >= lower => vec![idx],
                _ => vec![],
            },
            None => (lower..self.values.len())
                .filter(|&i| !self.used[i] && candidate_ok(self, i))
                .collect(),
        };

        for idx in candidates {
            self.nodes += 1;
            let (v, t) = self.values[idx].clone();
            self.used[idx] = true;
            self.row_v[ri] += v;
            self.col_v[ci] += v;
            self.row_t[ri] = self.t_group.add(&self.row_t[ri], &t);
            self.col_t[ci] = self.t_group.add(&self.col_t[ci], &t);
            self.cells.push(idx);
            if self.descend() {
                return true;
            }
            self.cells.pop();
            self.row_v[ri] -= v;
            self.col_v[ci] -= v;
            self.row_t[ri] = self.t_group.sub(&self.row_t[ri], &t);
            self.col_t[ci] = self.t_group.sub(&self.col_t[ci], &t);
            self.used[idx] = false;
            if self.budget_hit {
                break;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> Group {
        Group::parse(spec).unwrap()
    }

    #[test]
    fn synthesize_finds_the_small_bases() {
        for (spec, a, c) in [("Z3+Z2+Z2+Z2", 3, 2), ("Z3+Z2+Z4", 3, 2), ("Z5+Z2+Z2", 5, 1)] {
            let problem = SearchProblem::zero_sum(g(spec), a, 4, c);
            let set = synthesize(&problem).unwrap().found().unwrap_or_else(|| {
                panic!("no zero-sum set found over {spec}");
            });
            assert!(set.verify_star().ok);
            assert_eq!((set.a, set.b, set.c), (a, 4, c));
        }
    }

    #[test]
    fn synthesize_is_deterministic() {
        let problem = SearchProblem::zero_sum(g("Z3+Z2+Z2"), 3, 4, 1);
        let one = synthesize(&problem).unwrap().found().unwrap();
        let two = synthesize(&problem).unwrap().found().unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn synthesize_rejects_mismatched_cell_count() {
        let problem = SearchProblem::zero_sum(g("Z3+Z2+Z2"), 3, 4, 2);
        assert!(synthesize(&problem).is_err());
    }

    #[test]
    fn zero_sum_two_by_two_over_klein_is_exhausted() {
        // Any zero-sum row (x, y) needs y = −x = x: a duplicate.
        let problem = SearchProblem::zero_sum(g("Z2+Z2"), 2, 2, 1);
        assert!(matches!(
            synthesize(&problem).unwrap(),
            SearchOutcome::Exhausted { .. }
        ));
    }

    #[test]
    fn tiny_budget_reports_budget_exceeded() {
        let mut problem = SearchProblem::zero_sum(g("Z3+Z2+Z4"), 3, 4, 2);
        problem.budget = SearchBudget { max_nodes: 3, time_limit: None };
        assert!(matches!(
            synthesize(&problem).unwrap(),
            SearchOutcome::BudgetExceeded { nodes: 3 }
        ));
    }

    #[test]
    fn fixed_rows_are_honored() {
        let grp = g("Z2+Z2");
        let mut problem = SearchProblem::zero_sum(grp.clone(), 2, 2, 1);
        problem.zero_sum = false;
        problem.fixed_rows = vec![vec![grp.element(&[0, 0]), grp.element(&[1, 1])]];
        let set = synthesize(&problem).unwrap().found().unwrap();
        assert_eq!(set.arrays[0].entry(0, 1), &grp.element(&[1, 1]));
        assert_eq!(set.gamma, grp.element(&[1, 1]));
        assert!(set.verify().ok);
    }

    #[test]
    fn oracle_proves_nonexistence_for_cyclic_sylow() {
        let report = prove_nonexistence(&g("Z6"), 2, 3, 1, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert!(report.nonexistent);
        assert!(report.witness.is_none());
    }

    #[test]
    fn oracle_proves_nonexistence_for_two_by_odd() {
        let report =
            prove_nonexistence(&g("Z2+Z2+Z3"), 2, 3, 2, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert!(report.nonexistent);
    }

    #[test]
    fn oracle_finds_the_klein_witness() {
        let report = prove_nonexistence(&g("Z2+Z2"), 2, 2, 1, DEFAULT_EXHAUSTIVE_CAP).unwrap();
        assert!(!report.nonexistent);
        let witness = report.witness.unwrap();
        assert!(witness.verify().ok);
        assert!(witness.arrays[0].entry(0, 0).is_zero());
    }

    #[test]
    fn oracle_rejects_oversized_groups() {
        assert!(matches!(
            prove_nonexistence(&g("Z32"), 2, 16, 1, DEFAULT_EXHAUSTIVE_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn gadget_templates_are_valid() {
        assert!(GadgetTemplate::builtin(BaseKind::P22).is_valid(BaseKind::P22));
        assert!(GadgetTemplate::builtin(BaseKind::P222).is_valid(BaseKind::P222));
    }

    #[test]
    fn scalable_p22_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        for p in [3u64, 5, 7, 11, 13, 31] {
            let set = synthesize_scalable_base(BaseKind::P22, p, &cache).unwrap();
            assert_eq!((set.a, set.b, set.c), (p as usize, 4, 1));
            let report = set.verify_star();
            assert!(report.ok, "p22 at p = {p}: {:#?}", report.failures);
        }
    }

    #[test]
    fn scalable_p222_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        for p in [3u64, 5, 7, 13, 31] {
            let set = synthesize_scalable_base(BaseKind::P222, p, &cache).unwrap();
            assert_eq!((set.a, set.b, set.c), (p as usize, 4, 2));
            let report = set.verify_star();
            assert!(report.ok, "p222 at p = {p}: {:#?}", report.failures);
        }
    }

    #[test]
    fn scalable_base_reuses_the_cached_header() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let first = synthesize_scalable_base(BaseKind::P22, 11, &cache).unwrap();
        let entries: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
        assert!(!entries.is_empty(), "header search should populate the cache");
        let second = synthesize_scalable_base(BaseKind::P22, 11, &cache).unwrap();
        assert_eq!(first, second);
    }
}
