//! Orbit matrices (tactical decomposition matrices) for a prescribed group
//! action on a symmetric design: validity conditions, admissible-row
//! enumeration, and exhaustive generation with equivalence reduction.
//!
//! For a group of order g acting with point-orbit sizes ω_j and block-orbit
//! sizes Ω_i, entry s[i][j] counts the points of point-orbit j incident
//! with one (any) block of block-orbit i. Writing w_j = g/ω_j, a matrix
//! can belong to a 2-(v,k,λ) design only if
//!
//! - row condition: Σ_j s[i][j] = k,
//! - column condition: Σ_i Ω_i·s[i][j] = k·ω_j,
//! - orthogonality: Σ_j w_j·s[r][j]·s[i][j] = λ·g + δ_{ri}·(k−λ)·g/Ω_i.
//!
//! Two orbit matrices are equivalent when one maps to the other by
//! permuting block-orbit rows within equal-Ω classes and point-orbit
//! columns within equal-ω classes. Generation emits exactly the
//! lexicographically smallest member of each class (row-major, rows
//! compared as tuples), so counts are class counts under this convention.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::design::{DesignParams, IncidenceMatrix};
use crate::feasibility::OrbitDistribution;

/// Ordered orbit-size vectors for points and blocks under the prescribed
/// group. Sizes are kept ascending (fixed orbits first).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrbitStructure {
    point_sizes: Vec<u32>,
    block_sizes: Vec<u32>,
    group_order: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StructureError {
    SumMismatch { points: u64, blocks: u64 },
    SizeDoesNotDivideGroupOrder { size: u32, group_order: u32 },
    ClassMismatch,
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StructureError::SumMismatch { points, blocks } => {
                write!(f, "point sizes sum {points} != block sizes sum {blocks}")
            }
            StructureError::SizeDoesNotDivideGroupOrder { size, group_order } => {
                write!(f, "orbit size {size} does not divide group order {group_order}")
            }
            StructureError::ClassMismatch => {
                write!(f, "point and block orbit size multisets differ")
            }
        }
    }
}

impl OrbitStructure {
    pub fn new(
        mut point_sizes: Vec<u32>,
        mut block_sizes: Vec<u32>,
        group_order: u32,
    ) -> Result<Self, StructureError> {
        point_sizes.sort_unstable();
        block_sizes.sort_unstable();
        let ps: u64 = point_sizes.iter().map(|&x| x as u64).sum();
        let bs: u64 = block_sizes.iter().map(|&x| x as u64).sum();
        if ps != bs {
            return Err(StructureError::SumMismatch { points: ps, blocks: bs });
        }
        for &s in point_sizes.iter().chain(&block_sizes) {
            if s == 0 || group_order % s != 0 {
                return Err(StructureError::SizeDoesNotDivideGroupOrder {
                    size: s,
                    group_order,
                });
            }
        }
        if point_sizes != block_sizes {
            // For symmetric designs the two multisets coincide; after the
            // sort above equality is exactly the multiset check.
            return Err(StructureError::ClassMismatch);
        }
        Ok(OrbitStructure { point_sizes, block_sizes, group_order })
    }

    pub fn from_distribution(dist: &OrbitDistribution, p: usize, q: usize) -> Self {
        let sizes = dist.orbit_sizes(p, q);
        OrbitStructure::new(sizes.clone(), sizes, (p * q) as u32).expect("valid distribution")
    }

    /// One orbit of size 1 per point/block (trivial group).
    pub fn trivial(v: usize) -> Self {
        OrbitStructure {
            point_sizes: vec![1; v],
            block_sizes: vec![1; v],
            group_order: 1,
        }
    }

    /// A single orbit of length v (regular cyclic action).
    pub fn single_orbit(v: usize) -> Self {
        OrbitStructure {
            point_sizes: vec![v as u32],
            block_sizes: vec![v as u32],
            group_order: v as u32,
        }
    }

    pub fn n(&self) -> usize {
        self.point_sizes.len()
    }

    pub fn v(&self) -> usize {
        self.point_sizes.iter().map(|&x| x as usize).sum()
    }

    pub fn group_order(&self) -> u32 {
        self.group_order
    }

    pub fn point_sizes(&self) -> &[u32] {
        &self.point_sizes
    }

    pub fn block_sizes(&self) -> &[u32] {
        &self.block_sizes
    }

    /// Ranges of equal point-orbit size (column equivalence classes).
    pub(crate) fn point_classes(&self) -> Vec<(u16, u16)> {
        classes_of(&self.point_sizes)
    }

    /// Class id per block row (row equivalence classes).
    pub(crate) fn block_class_ids(&self) -> Vec<u16> {
        let mut ids = Vec::with_capacity(self.block_sizes.len());
        let mut id = 0u16;
        for (i, &s) in self.block_sizes.iter().enumerate() {
            if i > 0 && s != self.block_sizes[i - 1] {
                id += 1;
            }
            ids.push(id);
        }
        ids
    }
}

fn classes_of(sizes: &[u32]) -> Vec<(u16, u16)> {
    let mut out = Vec::new();
    let mut start = 0usize;
    for i in 1..=sizes.len() {
        if i == sizes.len() || sizes[i] != sizes[start] {
            out.push((start as u16, i as u16));
            start = i;
        }
    }
    out
}

/// An integer matrix of tactical-decomposition counts over an orbit
/// structure.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OrbitMatrix {
    structure: OrbitStructure,
    entries: Vec<u8>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OmViolation {
    ParamsMismatch { structure_v: usize, params_v: usize },
    EntryBound { row: usize, col: usize },
    RowSum { row: usize },
    ColumnSum { col: usize },
    Orthogonality { r: usize, i: usize },
}

impl fmt::Display for OmViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OmViolation::ParamsMismatch { structure_v, params_v } => {
                write!(f, "structure covers {structure_v} points, params say {params_v}")
            }
            OmViolation::EntryBound { row, col } => {
                write!(f, "entry ({row},{col}) exceeds its orbit size")
            }
            OmViolation::RowSum { row } => write!(f, "row condition fails at row {row}"),
            OmViolation::ColumnSum { col } => write!(f, "column condition fails at column {col}"),
            OmViolation::Orthogonality { r, i } => {
                write!(f, "orthogonality fails for rows ({r},{i})")
            }
        }
    }
}

impl OrbitMatrix {
    pub fn new(structure: OrbitStructure, entries: Vec<u8>) -> OrbitMatrix {
        assert_eq!(entries.len(), structure.n() * structure.n());
        OrbitMatrix { structure, entries }
    }

    pub fn structure(&self) -> &OrbitStructure {
        &self.structure
    }

    pub fn n(&self) -> usize {
        self.structure.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n() + j]
    }

    pub fn row(&self, i: usize) -> &[u8] {
        let n = self.n();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    /// The orbit matrix of a design under the trivial group: the incidence
    /// matrix itself, one orbit per point and block.
    pub fn from_incidence(m: &IncidenceMatrix) -> OrbitMatrix {
        let v = m.v();
        let mut entries = Vec::with_capacity(v * v);
        for i in 0..v {
            for j in 0..v {
                entries.push(m.get(i, j) as u8);
            }
        }
        OrbitMatrix::new(OrbitStructure::trivial(v), entries)
    }

    /// Checks all four orbit-matrix conditions for the given parameters.
    pub fn check(&self, params: &DesignParams) -> Result<(), OmViolation> {
        let s = &self.structure;
        if s.v() != params.v() {
            return Err(OmViolation::ParamsMismatch {
                structure_v: s.v(),
                params_v: params.v(),
            });
        }
        let n = s.n();
        let g = s.group_order as u64;
        let k = params.k() as u64;
        let lambda = params.lambda() as u64;
        let w: Vec<u64> = s.point_sizes.iter().map(|&o| g / o as u64).collect();
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) as u32 > s.point_sizes[j] {
                    return Err(OmViolation::EntryBound { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            let sum: u64 = self.row(i).iter().map(|&x| x as u64).sum();
            if sum != k {
                return Err(OmViolation::RowSum { row: i });
            }
        }
        for j in 0..n {
            let sum: u64 = (0..n)
                .map(|i| s.block_sizes[i] as u64 * self.get(i, j) as u64)
                .sum();
            if sum != k * s.point_sizes[j] as u64 {
                return Err(OmViolation::ColumnSum { col: j });
            }
        }
        for r in 0..n {
            for i in 0..n {
                let dot: u64 = (0..n)
                    .map(|j| w[j] * self.get(r, j) as u64 * self.get(i, j) as u64)
                    .sum();
                let mut target = lambda * g;
                if r == i {
                    target += (k - lambda) * g / s.block_sizes[i] as u64;
                }
                if dot != target {
                    return Err(OmViolation::Orthogonality { r, i });
                }
            }
        }
        Ok(())
    }
}

/// True iff all four orbit-matrix invariants hold for (v,k,λ).
pub fn check_orbit_matrix(om: &OrbitMatrix, params: &DesignParams) -> bool {
    om.check(params).is_ok()
}

/// All admissible rows for block-orbit `i`: integer vectors t with
/// 0 ≤ t_j ≤ ω_j, Σ t_j = k, and the diagonal orthogonality condition
/// Σ w_j·t_j² = λ·g + (k−λ)·g/Ω_i. Sorted ascending.
pub fn row_prototypes(
    params: &DesignParams,
    structure: &OrbitStructure,
    i: usize,
) -> Vec<Vec<u8>> {
    let ctx = GenCtx::new(params, structure);
    let mut out = Vec::new();
    let mut cand = vec![0u8; structure.n()];
    proto_dfs(&ctx, i, 0, 0, 0, &mut cand, &mut out);
    out
}

fn proto_dfs(
    ctx: &GenCtx,
    i: usize,
    j: usize,
    srow: u32,
    sdiag: u32,
    cand: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    let n = ctx.n;
    if j == n {
        if srow == ctx.k && sdiag == ctx.tdiag[i] {
            out.push(cand.clone());
        }
        return;
    }
    for t in 0..=ctx.omega[j] {
        let srow2 = srow + t;
        if srow2 > ctx.k || srow2 + ctx.sw_suffix[j + 1] < ctx.k {
            continue;
        }
        let sdiag2 = sdiag + ctx.w[j] * t * t;
        if sdiag2 > ctx.tdiag[i] || sdiag2 + ctx.sd_suffix[j + 1] < ctx.tdiag[i] {
            continue;
        }
        cand[j] = t as u8;
        proto_dfs(ctx, i, j + 1, srow2, sdiag2, cand, out);
    }
    cand[j] = 0;
}

struct GenCtx {
    n: usize,
    k: u32,
    omega: Vec<u32>,
    bigomega: Vec<u32>,
    w: Vec<u32>,
    tdiag: Vec<u32>,
    tcross: u32,
    row_class: Vec<u16>,
    col_cells: Vec<(u16, u16)>,
    /// Σ_{j'≥j} ω_{j'}
    sw_suffix: Vec<u32>,
    /// Σ_{j'≥j} w_{j'}·ω_{j'}²
    sd_suffix: Vec<u32>,
    /// Σ_{i'≥i} Ω_{i'}
    cap_suffix: Vec<u32>,
}

impl GenCtx {
    fn new(params: &DesignParams, structure: &OrbitStructure) -> GenCtx {
        let n = structure.n();
        let g = structure.group_order;
        let k = params.k() as u32;
        let lambda = params.lambda() as u32;
        let omega = structure.point_sizes.clone();
        let bigomega = structure.block_sizes.clone();
        let w: Vec<u32> = omega.iter().map(|&o| g / o).collect();
        let tdiag: Vec<u32> = bigomega
            .iter()
            .map(|&o| lambda * g + (k - lambda) * (g / o))
            .collect();
        let mut sw_suffix = vec![0u32; n + 1];
        let mut sd_suffix = vec![0u32; n + 1];
        for j in (0..n).rev() {
            sw_suffix[j] = sw_suffix[j + 1] + omega[j];
            sd_suffix[j] = sd_suffix[j + 1] + w[j] * omega[j] * omega[j];
        }
        let mut cap_suffix = vec![0u32; n + 1];
        for i in (0..n).rev() {
            cap_suffix[i] = cap_suffix[i + 1] + bigomega[i];
        }
        GenCtx {
            n,
            k,
            omega,
            bigomega,
            w,
            tdiag,
            tcross: lambda * g,
            row_class: structure.block_class_ids(),
            col_cells: structure.point_classes(),
            sw_suffix,
            sd_suffix,
            cap_suffix,
        }
    }
}

/// Dev-only search statistics (enabled by the `search-stats` feature).
#[cfg(feature = "search-stats")]
pub mod stats {
    use core::sync::atomic::{AtomicU64, Ordering};
    pub static CANON_CALLS: AtomicU64 = AtomicU64::new(0);
    pub static CANON_NODES: AtomicU64 = AtomicU64::new(0);
    pub static FILL_STEPS: AtomicU64 = AtomicU64::new(0);
    pub static ROWS_PLACED: AtomicU64 = AtomicU64::new(0);

    pub fn bump(counter: &AtomicU64) {
        counter.fetch_add(1, Ordering::Relaxed);
    }

    pub fn snapshot() -> (u64, u64, u64, u64) {
        (
            CANON_CALLS.load(Ordering::Relaxed),
            CANON_NODES.load(Ordering::Relaxed),
            FILL_STEPS.load(Ordering::Relaxed),
            ROWS_PLACED.load(Ordering::Relaxed),
        )
    }
}

#[cfg(feature = "search-stats")]
macro_rules! bump {
    ($c:ident) => {
        stats::bump(&stats::$c)
    };
}

#[cfg(not(feature = "search-stats"))]
macro_rules! bump {
    ($c:ident) => {};
}

/// Canonicity test for a prefix of placed rows: returns false iff some
/// permutation of the placed rows within their classes combined with a
/// column permutation within column classes produces a lexicographically
/// smaller prefix.
pub(crate) fn prefix_is_canonical(
    rows: &[Vec<u8>],
    row_class: &[u16],
    col_cells: &[(u16, u16)],
) -> bool {
    bump!(CANON_CALLS);
    let init: Vec<Vec<u16>> = col_cells.iter().map(|&(a, b)| (a..b).collect()).collect();
    let mut used = vec![false; rows.len()];
    !beats(rows, row_class, 0, &init, &mut used)
}

/// DFS over relabelings that keep output rows 0..r−1 equal to the stored
/// prefix; true iff a strictly smaller arrangement exists.
fn beats(
    rows: &[Vec<u8>],
    row_class: &[u16],
    r: usize,
    cells: &[Vec<u16>],
    used: &mut [bool],
) -> bool {
    let t = rows.len();
    if r == t {
        return false;
    }
    for u in 0..t {
        if used[u] || row_class[u] != row_class[r] {
            continue;
        }
        bump!(CANON_NODES);
        // identical unused rows are interchangeable: trying one suffices
        if (0..u).any(|u2| {
            !used[u2] && row_class[u2] == row_class[u] && rows[u2] == rows[u]
        }) {
            continue;
        }
        let mut refined: Vec<Vec<u16>> = Vec::with_capacity(cells.len());
        let mut outcome = Ordering::Equal;
        let mut pos = 0usize;
        let mut vals: Vec<u8> = Vec::new();
        'outer: for cell in cells {
            vals.clear();
            vals.extend(cell.iter().map(|&c| rows[u][c as usize]));
            vals.sort_unstable();
            for (m, &vv) in vals.iter().enumerate() {
                match vv.cmp(&rows[r][pos + m]) {
                    Ordering::Equal => {}
                    non_eq => {
                        outcome = non_eq;
                        break 'outer;
                    }
                }
            }
            // Equal segment: split the cell by value, ascending, which is
            // exactly the grouping the stored row exhibits.
            let mut idx = 0;
            while idx < vals.len() {
                let v0 = vals[idx];
                let sub: Vec<u16> = cell
                    .iter()
                    .copied()
                    .filter(|&c| rows[u][c as usize] == v0)
                    .collect();
                idx += sub.len();
                refined.push(sub);
            }
            pos += cell.len();
        }
        match outcome {
            Ordering::Less => return true,
            Ordering::Greater => continue,
            Ordering::Equal => {
                used[u] = true;
                let smaller = beats(rows, row_class, r + 1, &refined, used);
                used[u] = false;
                if smaller {
                    return true;
                }
            }
        }
    }
    false
}

/// The lexicographically smallest matrix equivalent to `om` (row/column
/// permutations within equal-size classes). Mainly a testing aid: emitted
/// matrices are already in this form.
pub fn lex_min_form(om: &OrbitMatrix) -> OrbitMatrix {
    let row_class = om.structure.block_class_ids();
    let col_cells = om.structure.point_classes();
    let n = om.n();
    let mut rows: Vec<Vec<u8>> = (0..n).map(|i| om.row(i).to_vec()).collect();
    // Row sort within classes is always sound and gives the loop a head
    // start.
    sort_rows_within_classes(&mut rows, &row_class);
    loop {
        match find_smaller(&rows, &row_class, &col_cells) {
            Some(better) => rows = better,
            None => break,
        }
    }
    let mut entries = Vec::with_capacity(n * n);
    for r in &rows {
        entries.extend_from_slice(r);
    }
    OrbitMatrix::new(om.structure.clone(), entries)
}

fn sort_rows_within_classes(rows: &mut [Vec<u8>], row_class: &[u16]) {
    let mut start = 0;
    for i in 1..=rows.len() {
        if i == rows.len() || row_class[i] != row_class[start] {
            rows[start..i].sort_unstable();
            start = i;
        }
    }
}

fn find_smaller(
    rows: &[Vec<u8>],
    row_class: &[u16],
    col_cells: &[(u16, u16)],
) -> Option<Vec<Vec<u8>>> {
    let init: Vec<Vec<u16>> = col_cells.iter().map(|&(a, b)| (a..b).collect()).collect();
    let mut used = vec![false; rows.len()];
    let mut sigma = Vec::new();
    beats_witness(rows, row_class, 0, &init, &mut used, &mut sigma)
}

fn beats_witness(
    rows: &[Vec<u8>],
    row_class: &[u16],
    r: usize,
    cells: &[Vec<u16>],
    used: &mut [bool],
    sigma: &mut Vec<usize>,
) -> Option<Vec<Vec<u8>>> {
    let t = rows.len();
    if r == t {
        return None;
    }
    for u in 0..t {
        if used[u] || row_class[u] != row_class[r] {
            continue;
        }
        let mut refined: Vec<Vec<u16>> = Vec::with_capacity(cells.len());
        let mut outcome = Ordering::Equal;
        let mut pos = 0usize;
        'outer: for cell in cells {
            let mut vals: Vec<u8> = cell.iter().map(|&c| rows[u][c as usize]).collect();
            vals.sort_unstable();
            for (m, &vv) in vals.iter().enumerate() {
                match vv.cmp(&rows[r][pos + m]) {
                    Ordering::Equal => {}
                    non_eq => {
                        outcome = non_eq;
                        break 'outer;
                    }
                }
            }
            let mut idx = 0;
            while idx < vals.len() {
                let v0 = vals[idx];
                let sub: Vec<u16> = cell
                    .iter()
                    .copied()
                    .filter(|&c| rows[u][c as usize] == v0)
                    .collect();
                idx += sub.len();
                refined.push(sub);
            }
            pos += cell.len();
        }
        match outcome {
            Ordering::Less => {
                // Materialize one smaller matrix: rows 0..r−1 reproduce the
                // prefix through `cells`; row r is the cell-sorted image of
                // row u; remaining rows fill in class order.
                sigma.push(u);
                used[u] = true;
                let mut order: Vec<usize> = sigma.clone();
                for x in 0..t {
                    if !order.contains(&x) {
                        order.push(x);
                    }
                }
                // Column map: within each final cell, sort source columns by
                // the value row u takes there (ties by index).
                let mut colmap: Vec<u16> = Vec::with_capacity(rows[0].len());
                for cell in cells {
                    let mut cols: Vec<u16> = cell.clone();
                    cols.sort_by_key(|&c| (rows[u][c as usize], c));
                    colmap.extend(cols);
                }
                let out: Vec<Vec<u8>> = order
                    .iter()
                    .map(|&src| colmap.iter().map(|&c| rows[src][c as usize]).collect())
                    .collect();
                used[u] = false;
                sigma.pop();
                let mut result = out;
                sort_rows_within_classes(&mut result[r + 1..], &row_class[r + 1..]);
                return Some(result);
            }
            Ordering::Greater => continue,
            Ordering::Equal => {
                used[u] = true;
                sigma.push(u);
                let found = beats_witness(rows, row_class, r + 1, &refined, used, sigma);
                sigma.pop();
                used[u] = false;
                if found.is_some() {
                    return found;
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, Default)]
pub struct GenOptions {
    /// Node budget; a node is one placed row. `None` means unlimited.
    pub budget: Option<u64>,
    /// Explore only the subtree below this already-canonical prefix of
    /// rows (as produced by [`search_prefixes`]).
    pub prefix: Option<Vec<Vec<u8>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenOutcome {
    /// False iff the node budget stopped the search early.
    pub complete: bool,
    pub nodes: u64,
}

/// Generates every orbit matrix for the structure, one canonical
/// representative per equivalence class, in lexicographic order.
pub fn generate_orbit_matrices(
    params: &DesignParams,
    structure: &OrbitStructure,
    budget: Option<u64>,
) -> (Vec<OrbitMatrix>, GenOutcome) {
    let mut out = Vec::new();
    let outcome = generate_with(
        params,
        structure,
        &GenOptions { budget, prefix: None },
        |om| out.push(om.clone()),
    );
    (out, outcome)
}

/// Streaming variant of [`generate_orbit_matrices`].
pub fn generate_with<F: FnMut(&OrbitMatrix)>(
    params: &DesignParams,
    structure: &OrbitStructure,
    opts: &GenOptions,
    sink: F,
) -> GenOutcome {
    let ctx = GenCtx::new(params, structure);
    let mut search = Search {
        ctx: &ctx,
        params,
        structure,
        rows: Vec::with_capacity(structure.n()),
        colsum: vec![0u32; structure.n()],
        cross_suffix: Vec::new(),
        nodes: 0,
        budget: opts.budget,
        truncated: false,
        sink,
    };
    let depth = match &opts.prefix {
        Some(prefix) => {
            for row in prefix {
                assert!(search.push_row(row.clone()), "prefix must be canonical");
            }
            prefix.len()
        }
        None => 0,
    };
    search.nodes = 0; // prefix placement is not charged to the budget
    search.descend(depth);
    GenOutcome {
        complete: !search.truncated,
        nodes: search.nodes,
    }
}

/// All canonical row prefixes of the given depth, in lexicographic order.
/// Each prefix roots an independent subtree of the generation search, so
/// the list partitions the full run for parallel or sharded execution.
pub fn search_prefixes(
    params: &DesignParams,
    structure: &OrbitStructure,
    depth: usize,
) -> Vec<Vec<Vec<u8>>> {
    let ctx = GenCtx::new(params, structure);
    let mut out = Vec::new();
    let mut search = Search {
        ctx: &ctx,
        params,
        structure,
        rows: Vec::with_capacity(depth),
        colsum: vec![0u32; structure.n()],
        cross_suffix: Vec::new(),
        nodes: 0,
        budget: None,
        truncated: false,
        sink: |_: &OrbitMatrix| {},
    };
    search.collect_prefixes(0, depth.min(structure.n()), &mut out);
    out
}

/// Canonical first rows; equals `search_prefixes(.., 1)` flattened.
pub fn first_rows(params: &DesignParams, structure: &OrbitStructure) -> Vec<Vec<u8>> {
    search_prefixes(params, structure, 1)
        .into_iter()
        .map(|mut p| p.pop().unwrap())
        .collect()
}

struct Search<'a, F> {
    ctx: &'a GenCtx,
    params: &'a DesignParams,
    structure: &'a OrbitStructure,
    rows: Vec<Vec<u8>>,
    colsum: Vec<u32>,
    /// Per placed row: suffix sums Σ_{j'≥j} w_{j'}·ω_{j'}·s_{rj'} used to
    /// bound the cross-orthogonality dot products.
    cross_suffix: Vec<Vec<u32>>,
    nodes: u64,
    budget: Option<u64>,
    truncated: bool,
    sink: F,
}

impl<'a, F: FnMut(&OrbitMatrix)> Search<'a, F> {
    /// Places a fully-built candidate row if it passes the canonicity
    /// test; returns false (leaving state untouched) otherwise.
    fn push_row(&mut self, cand: Vec<u8>) -> bool {
        self.rows.push(cand);
        if !prefix_is_canonical(&self.rows, &self.ctx.row_class, &self.ctx.col_cells) {
            self.rows.pop();
            return false;
        }
        let i = self.rows.len() - 1;
        let row = self.rows.last().unwrap();
        let n = self.ctx.n;
        let mut suffix = vec![0u32; n + 1];
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1]
                + self.ctx.w[j] * self.ctx.omega[j] * row[j] as u32;
        }
        for j in 0..n {
            self.colsum[j] += self.ctx.bigomega[i] * row[j] as u32;
        }
        self.cross_suffix.push(suffix);
        true
    }

    fn pop_row(&mut self) {
        let row = self.rows.pop().unwrap();
        let i = self.rows.len();
        for j in 0..self.ctx.n {
            self.colsum[j] -= self.ctx.bigomega[i] * row[j] as u32;
        }
        self.cross_suffix.pop();
    }

    fn charge_node(&mut self) -> bool {
        bump!(ROWS_PLACED);
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                self.truncated = true;
                return false;
            }
        }
        true
    }

    fn descend(&mut self, i: usize) {
        if self.truncated {
            return;
        }
        let n = self.ctx.n;
        if i == n {
            // Column sums are exact by the per-entry bounds of the last
            // row's candidate generation; verify defensively.
            for j in 0..n {
                if self.colsum[j] != self.ctx.k * self.ctx.omega[j] {
                    return;
                }
            }
            let mut entries = Vec::with_capacity(n * n);
            for r in &self.rows {
                entries.extend_from_slice(r);
            }
            let om = OrbitMatrix::new(self.structure.clone(), entries);
            debug_assert!(om.check(self.params).is_ok());
            (self.sink)(&om);
            return;
        }
        for cand in self.row_candidates(i) {
            if self.truncated {
                return;
            }
            if !self.charge_node() {
                return;
            }
            if self.push_row(cand) {
                self.descend(i + 1);
                self.pop_row();
            }
        }
    }

    fn collect_prefixes(&mut self, i: usize, depth: usize, out: &mut Vec<Vec<Vec<u8>>>) {
        if i == depth {
            out.push(self.rows.clone());
            return;
        }
        if i == self.ctx.n {
            return;
        }
        for cand in self.row_candidates(i) {
            if self.push_row(cand) {
                self.collect_prefixes(i + 1, depth, out);
                self.pop_row();
            }
        }
    }

    fn same_class_prev(&self, i: usize) -> bool {
        i > 0 && self.ctx.row_class[i] == self.ctx.row_class[i - 1]
    }

    /// All admissible rows for position `i` against the placed prefix, in
    /// ascending order.
    ///
    /// Columns with the same orbit size and identical entries in every
    /// placed row are interchangeable, so the canonical (lex-min) matrix
    /// carries non-decreasing entries across each such twin group, and
    /// every placed row is constant on it. Enumeration therefore runs on
    /// group aggregates first — the subtotal T and square-sum Q of each
    /// group — where the row-sum, diagonal and all cross-orthogonality
    /// equations are exactly checkable, and only then expands the few
    /// surviving aggregates into non-decreasing value sequences.
    fn row_candidates(&self, i: usize) -> Vec<Vec<u8>> {
        let ctx = self.ctx;
        let n = ctx.n;

        // twin groups of columns
        let mut groups: Vec<Group> = Vec::new();
        let mut lo = 0usize;
        for j in 1..=n {
            let boundary = j == n
                || ctx.omega[j] != ctx.omega[lo]
                || (0..i).any(|r| self.rows[r][j] != self.rows[r][lo]);
            if boundary {
                groups.push(self.build_group(i, lo, j - lo));
                lo = j;
            }
        }
        if groups.iter().any(|g| g.keys.is_empty()) {
            return Vec::new();
        }

        // suffix bounds over groups
        let gn = groups.len();
        let mut suf_tmin = vec![0u32; gn + 1];
        let mut suf_tmax = vec![0u32; gn + 1];
        let mut suf_qwmin = vec![0u32; gn + 1];
        let mut suf_qwmax = vec![0u32; gn + 1];
        for g in (0..gn).rev() {
            let tmin = groups[g].keys.iter().map(|k| k.0).min().unwrap();
            let tmax = groups[g].keys.iter().map(|k| k.0).max().unwrap();
            let qmin = groups[g].keys.iter().map(|k| k.1).min().unwrap();
            let qmax = groups[g].keys.iter().map(|k| k.1).max().unwrap();
            suf_tmin[g] = suf_tmin[g + 1] + tmin;
            suf_tmax[g] = suf_tmax[g + 1] + tmax;
            suf_qwmin[g] = suf_qwmin[g + 1] + groups[g].w * qmin;
            suf_qwmax[g] = suf_qwmax[g + 1] + groups[g].w * qmax;
        }
        // per placed row: suffix min/max of w·s·T
        let mut suf_dmin = vec![vec![0u32; gn + 1]; i];
        let mut suf_dmax = vec![vec![0u32; gn + 1]; i];
        for r in 0..i {
            for g in (0..gn).rev() {
                let tmin = groups[g].keys.iter().map(|k| k.0).min().unwrap();
                let tmax = groups[g].keys.iter().map(|k| k.0).max().unwrap();
                let c = groups[g].w * groups[g].srg[r];
                suf_dmin[r][g] = suf_dmin[r][g + 1] + c * tmin;
                suf_dmax[r][g] = suf_dmax[r][g + 1] + c * tmax;
            }
        }

        let mut chosen: Vec<(u32, u32)> = Vec::with_capacity(gn);
        let mut dots = vec![0u32; i];
        let mut out: Vec<Vec<u8>> = Vec::new();
        self.aggregate_dfs(
            i,
            &groups,
            0,
            0,
            0,
            &mut dots,
            &Suffixes { suf_tmin, suf_tmax, suf_qwmin, suf_qwmax, suf_dmin, suf_dmax },
            &mut chosen,
            &mut out,
        );
        #[cfg(feature = "search-stats")]
        {
            extern crate std;
            std::eprintln!("row {} candidates: {}", i, out.len());
        }
        out.sort_unstable();
        // rows within a class ascend; drop candidates below the previous row
        if self.same_class_prev(i) {
            let prev = &self.rows[i - 1];
            let cut = out.partition_point(|c| c.as_slice() < prev.as_slice());
            out.drain(..cut);
        }
        out
    }

    fn build_group(&self, i: usize, lo: usize, len: usize) -> Group {
        let ctx = self.ctx;
        let omega = ctx.omega[lo];
        let target = ctx.k * omega;
        // per-entry bounds from the column condition
        let avail = target.saturating_sub(self.colsum[lo]);
        let cap = (avail / ctx.bigomega[i]).min(omega);
        let later = omega * ctx.cap_suffix[i + 1];
        let need = target.saturating_sub(self.colsum[lo]).saturating_sub(later);
        let low = need.div_ceil(ctx.bigomega[i]);
        let mut buckets: BTreeMap<(u32, u32), Vec<Vec<u8>>> = BTreeMap::new();
        if low <= cap {
            let mut seq = vec![0u8; len];
            gen_nondecreasing(len, 0, low, cap, 0, 0, &mut seq, &mut buckets);
        }
        let keys: Vec<(u32, u32)> = buckets.keys().copied().collect();
        Group {
            lo,
            len,
            w: ctx.w[lo],
            srg: (0..i).map(|r| self.rows[r][lo] as u32).collect(),
            keys,
            buckets,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn aggregate_dfs(
        &self,
        i: usize,
        groups: &[Group],
        g: usize,
        srow: u32,
        sdiagw: u32,
        dots: &mut Vec<u32>,
        suf: &Suffixes,
        chosen: &mut Vec<(u32, u32)>,
        out: &mut Vec<Vec<u8>>,
    ) {
        let ctx = self.ctx;
        if g == groups.len() {
            if srow != ctx.k || sdiagw != ctx.tdiag[i] {
                return;
            }
            if dots.iter().any(|&d| d != ctx.tcross) {
                return;
            }
            let mut cand = vec![0u8; ctx.n];
            assemble(groups, chosen, 0, &mut cand, out);
            return;
        }
        let w = groups[g].w;
        for &(t, q) in &groups[g].keys {
            bump!(FILL_STEPS);
            let srow2 = srow + t;
            if srow2 + suf.suf_tmin[g + 1] > ctx.k || srow2 + suf.suf_tmax[g + 1] < ctx.k {
                continue;
            }
            let sdiagw2 = sdiagw + w * q;
            if sdiagw2 + suf.suf_qwmin[g + 1] > ctx.tdiag[i]
                || sdiagw2 + suf.suf_qwmax[g + 1] < ctx.tdiag[i]
            {
                continue;
            }
            let mut ok = true;
            for r in 0..i {
                let d2 = dots[r] + w * groups[g].srg[r] * t;
                if d2 + suf.suf_dmin[r][g + 1] > ctx.tcross
                    || d2 + suf.suf_dmax[r][g + 1] < ctx.tcross
                {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for r in 0..i {
                dots[r] += w * groups[g].srg[r] * t;
            }
            chosen.push((t, q));
            self.aggregate_dfs(i, groups, g + 1, srow2, sdiagw2, dots, suf, chosen, out);
            chosen.pop();
            for r in 0..i {
                dots[r] -= w * groups[g].srg[r] * t;
            }
        }
    }
}

struct Group {
    lo: usize,
    len: usize,
    w: u32,
    /// entry of each placed row on this group (constant by construction)
    srg: Vec<u32>,
    keys: Vec<(u32, u32)>,
    buckets: BTreeMap<(u32, u32), Vec<Vec<u8>>>,
}

struct Suffixes {
    suf_tmin: Vec<u32>,
    suf_tmax: Vec<u32>,
    suf_qwmin: Vec<u32>,
    suf_qwmax: Vec<u32>,
    suf_dmin: Vec<Vec<u32>>,
    suf_dmax: Vec<Vec<u32>>,
}

/// Non-decreasing sequences of the given length with entries in
/// [low, cap], bucketed by (sum, square sum).
fn gen_nondecreasing(
    len: usize,
    pos: usize,
    low: u32,
    cap: u32,
    sum: u32,
    sq: u32,
    seq: &mut Vec<u8>,
    buckets: &mut BTreeMap<(u32, u32), Vec<Vec<u8>>>,
) {
    if pos == len {
        buckets.entry((sum, sq)).or_default().push(seq.clone());
        return;
    }
    let floor = if pos == 0 { low } else { (seq[pos - 1] as u32).max(low) };
    for t in floor..=cap {
        seq[pos] = t as u8;
        gen_nondecreasing(len, pos + 1, low, cap, sum + t, sq + t * t, seq, buckets);
    }
    seq[pos] = 0;
}

fn assemble(
    groups: &[Group],
    chosen: &[(u32, u32)],
    g: usize,
    cand: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    if g == groups.len() {
        out.push(cand.clone());
        return;
    }
    let grp = &groups[g];
    for seq in &grp.buckets[&chosen[g]] {
        cand[grp.lo..grp.lo + grp.len].copy_from_slice(seq);
        assemble(groups, chosen, g + 1, cand, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::testutil::fano;

    fn params_fano() -> DesignParams {
        DesignParams::new(7, 3, 1).unwrap()
    }

    fn params70() -> DesignParams {
        DesignParams::new(70, 24, 8).unwrap()
    }

    fn flagship_structure() -> OrbitStructure {
        let dist = OrbitDistribution { d1: 2, dp: 1, dq: 4, dpq: 9 };
        OrbitStructure::from_distribution(&dist, 2, 3)
    }

    #[test]
    fn trivial_group_orbit_matrix_of_a_design_checks() {
        let om = OrbitMatrix::from_incidence(&fano());
        assert!(om.check(&params_fano()).is_ok());
    }

    #[test]
    fn fano_singer_orbit_matrix_is_3() {
        // Oracle: exhaust all entries s ∈ {0..7} against the three
        // conditions; only s = 3 survives.
        let structure = OrbitStructure::single_orbit(7);
        let survivors: Vec<u8> = (0..=7u8)
            .filter(|&s| {
                OrbitMatrix::new(structure.clone(), alloc::vec![s])
                    .check(&params_fano())
                    .is_ok()
            })
            .collect();
        assert_eq!(survivors, alloc::vec![3]);
        // The generator agrees.
        let (oms, outcome) = generate_orbit_matrices(&params_fano(), &structure, None);
        assert!(outcome.complete);
        assert_eq!(oms.len(), 1);
        assert_eq!(oms[0].entries(), &[3]);
        // And so does the prototype enumeration.
        assert_eq!(
            row_prototypes(&params_fano(), &structure, 0),
            alloc::vec![alloc::vec![3u8]]
        );
    }

    #[test]
    fn row_condition_unsatisfiable_gives_no_prototypes() {
        // Structure with fewer points than k.
        let params = params_fano();
        let structure = OrbitStructure::new(alloc::vec![1, 1], alloc::vec![1, 1], 1);
        // total 2 < k = 3; prototypes must be empty for any row.
        let structure = structure.unwrap();
        assert!(row_prototypes(&params, &structure, 0).is_empty());
    }

    #[test]
    fn flagship_fixed_row_prototypes_count() {
        // Independent oracle: a fixed block meets every orbit fully or not
        // at all, so admissible rows correspond to sub-multisets of the
        // orbit sizes summing to k. Counted by dynamic programming.
        let structure = flagship_structure();
        let sizes = structure.point_sizes();
        let mut dp = alloc::vec![0u64; 25];
        dp[0] = 1;
        for &s in sizes {
            for total in (s as usize..=24).rev() {
                dp[total] += dp[total - s as usize];
            }
        }
        assert_eq!(dp[24], 1626);
        let protos = row_prototypes(&params70(), &structure, 0);
        assert_eq!(protos.len(), 1626);
        for p in &protos {
            // every fixed-row entry is all-or-nothing on its orbit
            for (j, &e) in p.iter().enumerate() {
                assert!(e == 0 || e as u32 == sizes[j]);
            }
            let sum: u32 = p.iter().map(|&e| e as u32).sum();
            assert_eq!(sum, 24);
        }
        // Canonical first rows collapse the class symmetry.
        let firsts = first_rows(&params70(), &structure);
        assert_eq!(firsts.len(), 5);
    }

    /// Brute-force completeness oracle: enumerate all assignments, filter
    /// by the conditions, keep lex-min class representatives, and compare
    /// with the generator output.
    fn brute_force_oms(params: &DesignParams, structure: &OrbitStructure) -> Vec<OrbitMatrix> {
        let n = structure.n();
        let mut all: Vec<Vec<u8>> = alloc::vec![Vec::new()];
        for idx in 0..n * n {
            let j = idx % n;
            let bound = structure.point_sizes()[j] as u8;
            let mut next = Vec::new();
            for partial in &all {
                for t in 0..=bound {
                    let mut p2 = partial.clone();
                    p2.push(t);
                    next.push(p2);
                }
            }
            all = next;
            // light pruning on completed rows to keep the state space sane
            if j == n - 1 {
                let k = params.k() as u32;
                all.retain(|p| {
                    let row = &p[p.len() - n..];
                    row.iter().map(|&x| x as u32).sum::<u32>() == k
                });
            }
        }
        let mut reps: Vec<OrbitMatrix> = Vec::new();
        for entries in all {
            let om = OrbitMatrix::new(structure.clone(), entries);
            if om.check(params).is_ok() {
                let canon = lex_min_form(&om);
                if !reps.contains(&canon) {
                    reps.push(canon);
                }
            }
        }
        reps.sort_by(|a, b| a.entries().cmp(b.entries()));
        reps
    }

    #[test]
    fn generator_matches_brute_force_on_fano_z3() {
        // Z3 on the Fano plane fixes one point: orbit sizes (1, 3, 3).
        let params = params_fano();
        let structure =
            OrbitStructure::new(alloc::vec![1, 3, 3], alloc::vec![1, 3, 3], 3).unwrap();
        let brute = brute_force_oms(&params, &structure);
        let (gen, outcome) = generate_orbit_matrices(&params, &structure, None);
        assert!(outcome.complete);
        assert_eq!(
            gen.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>(),
            brute.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>()
        );
        assert!(!gen.is_empty());
    }

    #[test]
    fn generator_matches_brute_force_on_fano_z2() {
        // An involution on the Fano plane fixes one point: sizes (1,2,2,2).
        let params = params_fano();
        let structure =
            OrbitStructure::new(alloc::vec![1, 2, 2, 2], alloc::vec![1, 2, 2, 2], 2).unwrap();
        let brute = brute_force_oms(&params, &structure);
        let (gen, outcome) = generate_orbit_matrices(&params, &structure, None);
        assert!(outcome.complete);
        assert_eq!(
            gen.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>(),
            brute.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn emitted_matrices_are_canonical_and_distinct() {
        let params = params_fano();
        let structure =
            OrbitStructure::new(alloc::vec![1, 3, 3], alloc::vec![1, 3, 3], 3).unwrap();
        let (gen, _) = generate_orbit_matrices(&params, &structure, None);
        for om in &gen {
            assert_eq!(lex_min_form(om).entries(), om.entries());
        }
        for a in 0..gen.len() {
            for b in (a + 1)..gen.len() {
                assert_ne!(gen[a].entries(), gen[b].entries());
            }
        }
    }

    #[test]
    fn budget_truncation_is_reported() {
        let params = params70();
        let structure = flagship_structure();
        let (oms, outcome) = generate_orbit_matrices(&params, &structure, Some(3));
        assert!(!outcome.complete);
        assert!(oms.is_empty() || oms.len() < 10);
    }

    #[test]
    fn prefix_partitions_cover_the_run() {
        let params = params_fano();
        let structure =
            OrbitStructure::new(alloc::vec![1, 2, 2, 2], alloc::vec![1, 2, 2, 2], 2).unwrap();
        let (all, _) = generate_orbit_matrices(&params, &structure, None);
        let prefixes = search_prefixes(&params, &structure, 2);
        let mut merged = Vec::new();
        for p in prefixes {
            generate_with(
                &params,
                &structure,
                &GenOptions { budget: None, prefix: Some(p) },
                |om| merged.push(om.clone()),
            );
        }
        assert_eq!(
            merged.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>(),
            all.iter().map(|m| m.entries().to_vec()).collect::<Vec<_>>()
        );
    }
}
