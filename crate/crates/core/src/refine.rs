//! Refinement of a Z_{pq}-orbit matrix into Z_p-orbit matrices whose
//! eventual designs still admit the order-q power as an automorphism.
//!
//! Under the subgroup generated by ρ^q (order p), a parent orbit of
//! length q splits into q fixed child orbits, a parent orbit of length
//! p·q splits into q child orbits of length p, and parent orbits of
//! length 1 or p survive unchanged. The induced action of ρ^p permutes
//! the children of each split group in a q-cycle (index i → i+1 here);
//! a valid child matrix is invariant under that permutation applied to
//! rows and columns simultaneously, and aggregates back to the parent
//! entries cell by cell.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::design::{DesignParams, Permutation};
use crate::orbit::{OrbitMatrix, OrbitStructure};

/// How a parent structure splits into child orbits, and the induced
/// order-q action on the children.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RefinementMap {
    pub parent: OrbitMatrix,
    pub child_structure: OrbitStructure,
    /// Child row indices per parent block orbit, in child order.
    pub row_split: Vec<Vec<usize>>,
    /// Child column indices per parent point orbit, in child order.
    pub col_split: Vec<Vec<usize>>,
    /// Action of ρ^p on child block orbits (a q-cycle on each split
    /// group, identity elsewhere).
    pub q_action_rows: Permutation,
    pub q_action_cols: Permutation,
    pub p: usize,
    pub q: usize,
}

/// A Z_p-level orbit matrix together with its provenance map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RefinedOrbitMatrix {
    pub matrix: OrbitMatrix,
    pub map: RefinementMap,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RefineError {
    /// Parent group order is not p·q.
    GroupOrderMismatch { group_order: u32, p: usize, q: usize },
    /// Parent fails the orbit-matrix conditions.
    ParentInvalid,
}

impl fmt::Display for RefineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RefineError::GroupOrderMismatch { group_order, p, q } => {
                write!(f, "parent group order {group_order} is not {p}*{q}")
            }
            RefineError::ParentInvalid => write!(f, "parent orbit matrix is inconsistent"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RefinementViolation {
    ChildMatrix(crate::orbit::OmViolation),
    Aggregation { parent_row: usize, parent_col: usize, child_row: usize },
    QActionInvariance { row: usize, col: usize },
}

impl fmt::Display for RefinementViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RefinementViolation::ChildMatrix(v) => write!(f, "child matrix: {v}"),
            RefinementViolation::Aggregation { parent_row, parent_col, child_row } => write!(
                f,
                "aggregation fails at parent cell ({parent_row},{parent_col}), child row {child_row}"
            ),
            RefinementViolation::QActionInvariance { row, col } => {
                write!(f, "q-action invariance fails at child cell ({row},{col})")
            }
        }
    }
}

/// Child orbit bookkeeping shared by refinement and indexing.
///
/// Child orbits are ordered by (size ascending, parent orbit ascending,
/// split index t ascending), and within a split group the index-t child
/// of a parent orbit laid out contiguously from `start` is:
///
/// - parent length q: the point `start + (p·t) mod q`;
/// - parent length pq: the points `start + (p·t + m·q) mod pq`, m < p.
///
/// With this numbering ρ^p maps child t to child t+1 (mod q).
pub fn child_split(sizes: &[u32], p: usize, q: usize) -> (Vec<u32>, Vec<Vec<usize>>) {
    let pq = (p * q) as u32;
    let mut child_sizes: Vec<u32> = Vec::new();
    // Two passes: size-1 children first, then size-p children, matching
    // the ascending-size ordering of OrbitStructure.
    let mut split: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for (parent, &len) in sizes.iter().enumerate() {
        if len == 1 {
            split[parent].push(child_sizes.len());
            child_sizes.push(1);
        } else if len == q as u32 {
            for _ in 0..q {
                split[parent].push(child_sizes.len());
                child_sizes.push(1);
            }
        }
    }
    for (parent, &len) in sizes.iter().enumerate() {
        if len == p as u32 {
            split[parent].push(child_sizes.len());
            child_sizes.push(p as u32);
        } else if len == pq {
            for _ in 0..q {
                split[parent].push(child_sizes.len());
                child_sizes.push(p as u32);
            }
        }
    }
    (child_sizes, split)
}

/// Point indices of each child orbit, given the contiguous parent layout.
pub fn child_point_cells(
    structure: &OrbitStructure,
    p: usize,
    q: usize,
) -> Vec<Vec<usize>> {
    let sizes = structure.point_sizes();
    let (child_sizes, split) = child_split(sizes, p, q);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); child_sizes.len()];
    let mut start = 0usize;
    for (parent, &len) in sizes.iter().enumerate() {
        let len = len as usize;
        let children = &split[parent];
        if children.len() == 1 {
            cells[children[0]] = (start..start + len).collect();
        } else if len == q {
            for (t, &c) in children.iter().enumerate() {
                cells[c] = vec![start + (p * t) % q];
            }
        } else {
            // len == p*q
            for (t, &c) in children.iter().enumerate() {
                let mut pts: Vec<usize> = (0..p).map(|m| start + (p * t + m * q) % len).collect();
                pts.sort_unstable();
                cells[c] = pts;
            }
        }
        start += len;
    }
    cells
}

fn q_action_permutation(split: &[Vec<usize>], n_child: usize, q: usize) -> Permutation {
    let mut images: Vec<u16> = (0..n_child as u16).collect();
    for children in split {
        if children.len() == q {
            for t in 0..q {
                images[children[t]] = children[(t + 1) % q] as u16;
            }
        }
    }
    Permutation::new(images).expect("q-action is a permutation")
}

/// Builds the refinement map for a parent structure (no matrix search).
pub fn build_map(parent: &OrbitMatrix, p: usize, q: usize) -> RefinementMap {
    let structure = parent.structure();
    let (child_sizes, row_split) = child_split(structure.block_sizes(), p, q);
    let (child_sizes2, col_split) = child_split(structure.point_sizes(), p, q);
    debug_assert_eq!(child_sizes, child_sizes2);
    let n_child = child_sizes.len();
    let child_structure =
        OrbitStructure::new(child_sizes2, child_sizes, p as u32).expect("valid child structure");
    let q_action_rows = q_action_permutation(&row_split, n_child, q);
    let q_action_cols = q_action_permutation(&col_split, n_child, q);
    RefinementMap {
        parent: parent.clone(),
        child_structure,
        row_split,
        col_split,
        q_action_rows,
        q_action_cols,
        p,
        q,
    }
}

/// Checks aggregation consistency, q-action invariance, and the child
/// orbit-matrix conditions.
pub fn check_refinement(
    rom: &RefinedOrbitMatrix,
    params: &DesignParams,
) -> Result<(), RefinementViolation> {
    let m = &rom.matrix;
    let map = &rom.map;
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            if m.get(map.q_action_rows.image(i), map.q_action_cols.image(j)) != m.get(i, j) {
                return Err(RefinementViolation::QActionInvariance { row: i, col: j });
            }
        }
    }
    for (pi, rows) in map.row_split.iter().enumerate() {
        for (pj, cols) in map.col_split.iter().enumerate() {
            let want = map.parent.get(pi, pj) as u32;
            for &a in rows {
                let got: u32 = cols.iter().map(|&b| m.get(a, b) as u32).sum();
                if got != want {
                    return Err(RefinementViolation::Aggregation {
                        parent_row: pi,
                        parent_col: pj,
                        child_row: a,
                    });
                }
            }
        }
    }
    m.check(params).map_err(RefinementViolation::ChildMatrix)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RefineOutcome {
    pub children: u64,
}

/// Enumerates every refinement of `parent`, one representative per class
/// under cyclic shifts of the split groups (the relabelings commuting
/// with the q-action), in deterministic order.
pub fn refine_with<F: FnMut(&RefinedOrbitMatrix)>(
    parent: &OrbitMatrix,
    params: &DesignParams,
    p: usize,
    q: usize,
    mut sink: F,
) -> Result<RefineOutcome, RefineError> {
    let g = parent.structure().group_order();
    if g != (p * q) as u32 {
        return Err(RefineError::GroupOrderMismatch { group_order: g, p, q });
    }
    if parent.check(params).is_err() {
        return Err(RefineError::ParentInvalid);
    }
    let map = build_map(parent, p, q);
    let mut search = match RefineSearch::new(parent, params, &map, p, q) {
        Some(s) => s,
        // Forced cells already contradict: no children.
        None => return Ok(RefineOutcome { children: 0 }),
    };
    let mut children = 0u64;
    search.run(&mut |matrix| {
        let rom = RefinedOrbitMatrix { matrix, map: map.clone() };
        debug_assert!(check_refinement(&rom, params).is_ok());
        children += 1;
        sink(&rom);
    });
    Ok(RefineOutcome { children })
}

pub fn refine(
    parent: &OrbitMatrix,
    params: &DesignParams,
    p: usize,
    q: usize,
) -> Result<Vec<RefinedOrbitMatrix>, RefineError> {
    let mut out = Vec::new();
    refine_with(parent, params, p, q, |rom| out.push(rom.clone()))?;
    Ok(out)
}

/// One undetermined block of the child matrix: the representative row of
/// a split row group meeting a split column group. The q free entries
/// determine the whole q×q block through the q-action.
struct FreeCell {
    /// parent entry = sum of the free entries
    total: u32,
    /// child columns of the group, split index order
    cols: Vec<usize>,
    /// upper bound per entry (child orbit size of the column group)
    bound: u32,
}

struct RowGroup {
    /// child rows, split index order
    rows: Vec<usize>,
    cells: Vec<FreeCell>,
}

struct RefineSearch<'a> {
    params: &'a DesignParams,
    map: &'a RefinementMap,
    q: usize,
    n: usize,
    k: u32,
    tcross: u32,
    tdiag: Vec<u32>,
    w: Vec<u32>,
    /// child matrix buffer; forced rows prefilled
    child: Vec<Vec<u8>>,
    /// which child rows are already determined
    row_done: Vec<bool>,
    colsum: Vec<u32>,
    /// Σ_{i'} Ω_{i'} over not-yet-determined child rows
    cap_left: Vec<u32>,
    groups: Vec<RowGroup>,
    /// split column groups (for the shift-canonicity test)
    col_groups: Vec<Vec<usize>>,
}

impl<'a> RefineSearch<'a> {
    fn new(
        parent: &OrbitMatrix,
        params: &'a DesignParams,
        map: &'a RefinementMap,
        _p: usize,
        q: usize,
    ) -> Option<RefineSearch<'a>> {
        let child_structure = &map.child_structure;
        let n = child_structure.n();
        let gp = child_structure.group_order();
        let k = params.k() as u32;
        let lambda = params.lambda() as u32;
        let w: Vec<u32> = child_structure.point_sizes().iter().map(|&o| gp / o).collect();
        let tdiag: Vec<u32> = child_structure
            .block_sizes()
            .iter()
            .map(|&o| lambda * gp + (k - lambda) * (gp / o))
            .collect();
        let mut child = vec![vec![0u8; n]; n];
        let mut row_done = vec![false; n];

        // Forced entries. For an unsplit parent row all child entries are
        // determined; for split rows only the cells over split columns are
        // free.
        let mut groups: Vec<RowGroup> = Vec::new();
        for (pi, rows) in map.row_split.iter().enumerate() {
            if rows.len() == 1 {
                let a = rows[0];
                for (pj, cols) in map.col_split.iter().enumerate() {
                    let s = parent.get(pi, pj) as u32;
                    if cols.len() == 1 {
                        child[a][cols[0]] = s as u8;
                    } else {
                        // invariance forces a constant split: s must be
                        // divisible by q and fit the child orbit size
                        if s % q as u32 != 0 {
                            return None;
                        }
                        let e = s / q as u32;
                        if e > child_structure.point_sizes()[cols[0]] {
                            return None;
                        }
                        for &b in cols {
                            child[a][b] = e as u8;
                        }
                    }
                }
                row_done[a] = true;
            } else {
                let mut cells = Vec::new();
                for (pj, cols) in map.col_split.iter().enumerate() {
                    let s = parent.get(pi, pj) as u32;
                    if cols.len() == 1 {
                        // same value down the whole split row group
                        for &a in rows {
                            child[a][cols[0]] = s as u8;
                        }
                        if s > child_structure.point_sizes()[cols[0]] {
                            return None;
                        }
                    } else {
                        cells.push(FreeCell {
                            total: s,
                            cols: cols.clone(),
                            bound: child_structure.point_sizes()[cols[0]],
                        });
                    }
                }
                groups.push(RowGroup { rows: rows.clone(), cells });
            }
        }
        // Deterministic fill order: by first child row index.
        groups.sort_by_key(|gr| gr.rows[0]);

        // Validate the forced rows against each other.
        let mut s = RefineSearch {
            params,
            map,
            q,
            n,
            k,
            tcross: lambda * gp,
            tdiag,
            w,
            child,
            row_done,
            colsum: vec![0; n],
            cap_left: vec![0; n],
            groups,
            col_groups: map
                .col_split
                .iter()
                .filter(|cols| cols.len() > 1)
                .cloned()
                .collect(),
        };
        for a in 0..n {
            if s.row_done[a] {
                if !s.row_ok(a) {
                    return None;
                }
                for b in 0..n {
                    s.colsum[b] += s.big(a) * s.child[a][b] as u32;
                }
            }
        }
        for a in 0..n {
            if s.row_done[a] {
                for a2 in (a + 1)..n {
                    if s.row_done[a2] && !s.cross_ok(a, a2) {
                        return None;
                    }
                }
            }
        }
        Some(s)
    }

    fn big(&self, a: usize) -> u32 {
        self.map.child_structure.block_sizes()[a]
    }

    fn row_ok(&self, a: usize) -> bool {
        let row = &self.child[a];
        let sum: u32 = row.iter().map(|&x| x as u32).sum();
        if sum != self.k {
            return false;
        }
        let diag: u32 = (0..self.n).map(|b| self.w[b] * (row[b] as u32).pow(2)).sum();
        diag == self.tdiag[a]
    }

    fn cross_ok(&self, a: usize, a2: usize) -> bool {
        let dot: u32 = (0..self.n)
            .map(|b| self.w[b] * self.child[a][b] as u32 * self.child[a2][b] as u32)
            .sum();
        dot == self.tcross
    }

    fn run(&mut self, emit: &mut dyn FnMut(OrbitMatrix)) {
        self.place_group(0, emit);
    }

    /// Materializes a row group from its representative-row free entries:
    /// row t of the group takes entry x_m at column index (m+t) mod q of
    /// each split column group.
    fn write_group(&mut self, gi: usize, assignment: &[Vec<u8>]) {
        let q = self.q;
        let rows: Vec<usize> = self.groups[gi].rows.clone();
        for (ci, cell) in self.groups[gi].cells.iter().enumerate() {
            for (t, &a) in rows.iter().enumerate() {
                for m in 0..q {
                    self.child[a][cell.cols[(m + t) % q]] = assignment[ci][m];
                }
            }
        }
        for &a in &rows {
            self.row_done[a] = true;
            for b in 0..self.n {
                self.colsum[b] += self.big(a) * self.child[a][b] as u32;
            }
        }
    }

    fn erase_group(&mut self, gi: usize) {
        let rows: Vec<usize> = self.groups[gi].rows.clone();
        for &a in &rows {
            for b in 0..self.n {
                self.colsum[b] -= self.big(a) * self.child[a][b] as u32;
            }
            self.row_done[a] = false;
        }
        for cell in &self.groups[gi].cells {
            for &a in &rows {
                for &b in &cell.cols {
                    self.child[a][b] = 0;
                }
            }
        }
    }

    fn group_consistent(&self, gi: usize) -> bool {
        let rows = &self.groups[gi].rows;
        for &a in rows {
            if !self.row_ok(a) {
                return false;
            }
        }
        // pairs within the group
        for x in 0..rows.len() {
            for y in (x + 1)..rows.len() {
                if !self.cross_ok(rows[x], rows[y]) {
                    return false;
                }
            }
        }
        // against every earlier determined row
        for a in 0..self.n {
            if self.row_done[a] && !rows.contains(&a) {
                for &r in rows {
                    if !self.cross_ok(a, r) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn columns_feasible(&self, remaining_cap: &[u32]) -> bool {
        for b in 0..self.n {
            let target = self.k * self.map.child_structure.point_sizes()[b];
            if self.colsum[b] > target {
                return false;
            }
            if self.colsum[b] + self.map.child_structure.point_sizes()[b] * remaining_cap[b]
                < target
            {
                return false;
            }
        }
        true
    }

    fn place_group(&mut self, gi: usize, emit: &mut dyn FnMut(OrbitMatrix)) {
        if gi == self.groups.len() {
            // all rows determined; verify columns exactly
            for b in 0..self.n {
                if self.colsum[b] != self.k * self.map.child_structure.point_sizes()[b] {
                    return;
                }
            }
            let mut entries = Vec::with_capacity(self.n * self.n);
            for a in 0..self.n {
                entries.extend_from_slice(&self.child[a]);
            }
            emit(OrbitMatrix::new(self.map.child_structure.clone(), entries));
            return;
        }
        let cells = self.groups[gi].cells.len();
        let mut assignment: Vec<Vec<u8>> = Vec::with_capacity(cells);
        self.assign_cell(gi, 0, &mut assignment, emit);
    }

    fn assign_cell(
        &mut self,
        gi: usize,
        ci: usize,
        assignment: &mut Vec<Vec<u8>>,
        emit: &mut dyn FnMut(OrbitMatrix),
    ) {
        if ci == self.groups[gi].cells.len() {
            self.write_group(gi, assignment);
            if self.group_consistent(gi)
                && self.remaining_columns_ok(gi)
                && self.prefix_shift_canonical(gi)
            {
                self.place_group(gi + 1, emit);
            }
            self.erase_group(gi);
            return;
        }
        let total = self.groups[gi].cells[ci].total;
        let bound = self.groups[gi].cells[ci].bound;
        let q = self.q;
        let mut comp = vec![0u8; q];
        self.compositions(gi, ci, 0, total, bound, &mut comp, assignment, emit);
    }

    #[allow(clippy::too_many_arguments)]
    fn compositions(
        &mut self,
        gi: usize,
        ci: usize,
        pos: usize,
        left: u32,
        bound: u32,
        comp: &mut Vec<u8>,
        assignment: &mut Vec<Vec<u8>>,
        emit: &mut dyn FnMut(OrbitMatrix),
    ) {
        let q = self.q;
        if pos == q {
            if left == 0 {
                assignment.push(comp.clone());
                self.assign_cell(gi, ci + 1, assignment, emit);
                assignment.pop();
            }
            return;
        }
        let remaining_cells = (q - pos - 1) as u32;
        for x in 0..=bound.min(left) {
            if left - x > bound * remaining_cells {
                continue;
            }
            comp[pos] = x as u8;
            self.compositions(gi, ci, pos + 1, left - x, bound, comp, assignment, emit);
        }
        comp[pos] = 0;
    }

    fn remaining_columns_ok(&self, gi: usize) -> bool {
        let mut cap = 0u32;
        for g2 in (gi + 1)..self.groups.len() {
            for &a in &self.groups[g2].rows {
                cap += self.big(a);
            }
        }
        let caps = vec![cap; self.n];
        self.columns_feasible(&caps)
    }

    /// Shift-group canonicity: no combination of cyclic shifts of the
    /// determined split row groups and of the split column groups makes
    /// the determined prefix lexicographically smaller. Shifts are the
    /// relabelings of children that commute with the q-action and
    /// preserve the parent partition.
    fn prefix_shift_canonical(&self, gi_done: usize) -> bool {
        let mut ordered: Vec<usize> = self
            .groups
            .iter()
            .take(gi_done + 1)
            .flat_map(|g| g.rows.iter().copied())
            .collect();
        ordered.sort_unstable();
        let mut row_group_of = vec![usize::MAX; self.n];
        let mut row_pos = vec![0usize; self.n];
        for (idx, g) in self.groups.iter().take(gi_done + 1).enumerate() {
            for (t, &a) in g.rows.iter().enumerate() {
                row_group_of[a] = idx;
                row_pos[a] = t;
            }
        }
        let mut state = ShiftState {
            row_shift: vec![usize::MAX; gi_done + 1],
            col_shift: vec![usize::MAX; self.col_groups.len()],
        };
        !self.shift_beats(&ordered, 0, 0, &mut state, &row_group_of, &row_pos)
    }

    /// DFS over shift assignments, walking comparison cells in row-major
    /// order. Returns true iff some assignment makes the prefix strictly
    /// smaller; branches that turn out strictly greater are dropped.
    fn shift_beats(
        &self,
        ordered: &[usize],
        ri: usize,
        ci: usize,
        state: &mut ShiftState,
        row_group_of: &[usize],
        row_pos: &[usize],
    ) -> bool {
        if ri == ordered.len() {
            return false; // fully equal under these shifts
        }
        let a = ordered[ri];
        let g = row_group_of[a];
        if state.row_shift[g] == usize::MAX {
            for r in 0..self.q {
                state.row_shift[g] = r;
                if self.shift_beats(ordered, ri, ci, state, row_group_of, row_pos) {
                    state.row_shift[g] = usize::MAX;
                    return true;
                }
            }
            state.row_shift[g] = usize::MAX;
            return false;
        }
        if ci == self.col_groups.len() {
            return self.shift_beats(ordered, ri + 1, 0, state, row_group_of, row_pos);
        }
        if state.col_shift[ci] == usize::MAX {
            for t in 0..self.q {
                state.col_shift[ci] = t;
                if self.shift_beats(ordered, ri, ci, state, row_group_of, row_pos) {
                    state.col_shift[ci] = usize::MAX;
                    return true;
                }
            }
            state.col_shift[ci] = usize::MAX;
            return false;
        }
        // Both shifts known: compare the q-value segment of this cell.
        let q = self.q;
        let cols = &self.col_groups[ci];
        let src_row = self.groups[g].rows[(row_pos[a] + state.row_shift[g]) % q];
        let t_sh = state.col_shift[ci];
        for u in 0..q {
            let image = self.child[src_row][cols[(u + t_sh) % q]];
            let stored = self.child[a][cols[u]];
            if image < stored {
                return true;
            }
            if image > stored {
                return false;
            }
        }
        self.shift_beats(ordered, ri, ci + 1, state, row_group_of, row_pos)
    }
}

struct ShiftState {
    row_shift: Vec<usize>,
    col_shift: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feasibility::OrbitDistribution;

    fn params70() -> DesignParams {
        DesignParams::new(70, 24, 8).unwrap()
    }

    #[test]
    fn flagship_child_structure_matches_fixed_point_count() {
        let dist = OrbitDistribution { d1: 2, dp: 1, dq: 4, dpq: 9 };
        let structure = OrbitStructure::from_distribution(&dist, 2, 3);
        let (child_sizes, _) = child_split(structure.point_sizes(), 2, 3);
        let fixed = child_sizes.iter().filter(|&&s| s == 1).count();
        let twos = child_sizes.iter().filter(|&&s| s == 2).count();
        // 2 + 4·3 = 14 fixed points of ρ³, and 1 + 9·3 = 28 orbits of length 2
        assert_eq!(fixed, 14);
        assert_eq!(twos, 28);
    }

    #[test]
    fn child_cells_partition_the_points() {
        let dist = OrbitDistribution { d1: 2, dp: 1, dq: 4, dpq: 9 };
        let structure = OrbitStructure::from_distribution(&dist, 2, 3);
        let cells = child_point_cells(&structure, 2, 3);
        let mut seen = alloc::vec![false; 70];
        for cell in &cells {
            for &p in cell {
                assert!(!seen[p]);
                seen[p] = true;
            }
        }
        assert!(seen.iter().all(|&x| x));
    }

    #[test]
    fn prime_order_parent_is_rejected() {
        // A Z7 orbit matrix cannot be refined with p·q = 6.
        let params = DesignParams::new(7, 3, 1).unwrap();
        let structure = OrbitStructure::single_orbit(7);
        let om = OrbitMatrix::new(structure, alloc::vec![3]);
        assert_eq!(
            refine(&om, &params, 2, 3).unwrap_err(),
            RefineError::GroupOrderMismatch { group_order: 7, p: 2, q: 3 }
        );
    }

    #[test]
    fn trivial_parent_refines_to_itself() {
        // Nothing splits when every orbit has length 1: the single child
        // layout equals the parent layout.
        let dist = OrbitDistribution { d1: 70, dp: 0, dq: 0, dpq: 0 };
        let structure = OrbitStructure::from_distribution(&dist, 2, 3);
        let (child_sizes, split) = child_split(structure.point_sizes(), 2, 3);
        assert_eq!(child_sizes.len(), 70);
        assert!(split.iter().all(|s| s.len() == 1));
    }

    #[test]
    fn toy_aggregation_case() {
        // Hand-built 2-orbit example: a single parent orbit of length 6
        // with entry k over v = 6 formal points. Aggregation of any child
        // row must equal the parent entry; exercised via check_refinement
        // machinery on a hand-built map over formal sizes.
        let sizes = alloc::vec![6u32];
        let (child_sizes, split) = child_split(&sizes, 2, 3);
        assert_eq!(child_sizes, alloc::vec![2, 2, 2]);
        assert_eq!(split, alloc::vec![alloc::vec![0, 1, 2]]);
    }
}
