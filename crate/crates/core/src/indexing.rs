//! Indexing: expansion of a refined orbit matrix into incidence matrices
//! (designs) on which the full cyclic group acts as prescribed.
//!
//! Points and blocks are numbered orbit by orbit in ascending orbit size;
//! within an orbit of length ℓ the generator acts as i → i+1 (mod ℓ). One
//! representative block is chosen per block orbit; its orbit translates
//! fill the remaining rows. A representative for a block orbit of length
//! Ω must be invariant under ρ^Ω (its stabilizer) and must meet each
//! ρ^q-orbit of points in exactly the count prescribed by the refined
//! matrix row of the orbit's first child. The search fills block orbits
//! fixed-first, pruning with running pairwise-intersection counters
//! against all previously placed blocks and their translates.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitRow;
use crate::design::{AutomorphismPair, DesignParams, IncidenceMatrix, Permutation};
use crate::feasibility::OrbitDistribution;
use crate::orbit::{OrbitMatrix, OrbitStructure};
use crate::refine::{child_point_cells, RefinedOrbitMatrix};

/// A concrete cyclic action on points and blocks, with the contiguous
/// orbit layout used throughout the pipeline.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupAction {
    point_rho: Permutation,
    block_rho: Permutation,
    orbit_sizes: Vec<u32>,
    orbit_starts: Vec<usize>,
}

impl GroupAction {
    /// Builds the canonical action for the given ascending orbit sizes:
    /// points are numbered orbit by orbit and ρ cycles each orbit.
    pub fn from_orbit_sizes(sizes: &[u32]) -> GroupAction {
        debug_assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        let v: usize = sizes.iter().map(|&s| s as usize).sum();
        let mut images = vec![0u16; v];
        let mut starts = Vec::with_capacity(sizes.len());
        let mut at = 0usize;
        for &s in sizes {
            let s = s as usize;
            starts.push(at);
            for i in 0..s {
                images[at + i] = (at + (i + 1) % s) as u16;
            }
            at += s;
        }
        let rho = Permutation::new(images).expect("cycle layout is a permutation");
        GroupAction {
            block_rho: rho.clone(),
            point_rho: rho,
            orbit_sizes: sizes.to_vec(),
            orbit_starts: starts,
        }
    }

    pub fn from_distribution(dist: &OrbitDistribution, p: usize, q: usize) -> GroupAction {
        GroupAction::from_orbit_sizes(&dist.orbit_sizes(p, q))
    }

    /// Trivial action: every point and block fixed.
    pub fn trivial(v: usize) -> GroupAction {
        GroupAction::from_orbit_sizes(&vec![1u32; v])
    }

    pub fn point_rho(&self) -> &Permutation {
        &self.point_rho
    }

    pub fn block_rho(&self) -> &Permutation {
        &self.block_rho
    }

    pub fn orbit_sizes(&self) -> &[u32] {
        &self.orbit_sizes
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_sizes.len()
    }

    pub fn orbit_start(&self, i: usize) -> usize {
        self.orbit_starts[i]
    }

    pub fn v(&self) -> usize {
        self.point_rho.len()
    }

    pub fn order(&self) -> u64 {
        self.point_rho.order()
    }
}

/// Builds the canonical order-p·q action for an orbit distribution.
pub fn build_action(dist: &OrbitDistribution, p: usize, q: usize) -> GroupAction {
    GroupAction::from_distribution(dist, p, q)
}

/// A design produced by indexing, with its provenance.
#[derive(Clone, Debug)]
pub struct IndexedDesign {
    pub design: IncidenceMatrix,
    pub action: GroupAction,
    /// (parent orbit-matrix id, refined orbit-matrix id)
    pub provenance: (usize, usize),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum IndexError {
    /// The action's orbit sizes do not match the refined matrix's parent
    /// structure.
    ActionMismatch,
    /// Profile counts inconsistent with the q-action (corrupt input).
    InconsistentProfile { orbit: usize },
}

impl fmt::Display for IndexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            IndexError::ActionMismatch => {
                write!(f, "action orbit sizes do not match the refined matrix")
            }
            IndexError::InconsistentProfile { orbit } => {
                write!(f, "profile of block orbit {orbit} is not q-action invariant")
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct IndexOptions {
    /// Node budget; a node is one placed block orbit.
    pub budget: Option<u64>,
    /// Resume after this completed search path (chosen representatives,
    /// one per block orbit, as previously reported by the checkpoint
    /// callback). Candidates at or before the path are skipped.
    pub resume_after: Option<Vec<BitRow>>,
    /// Invoke the checkpoint callback when a subtree completes and at
    /// least this many nodes elapsed since the last checkpoint.
    pub checkpoint_every: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexOutcome {
    pub complete: bool,
    pub nodes: u64,
}

/// Enumerates every incidence matrix compatible with the refined orbit
/// matrix under the action (or, with `rom = None`, every design the
/// action admits), one representative per indexing-symmetry orbit.
/// Emitted designs validate and admit the action; emission order is
/// deterministic.
pub fn index_with<'cb>(
    rom: Option<&RefinedOrbitMatrix>,
    action: &GroupAction,
    params: &DesignParams,
    opts: &IndexOptions,
    on_design: &'cb mut dyn FnMut(&IncidenceMatrix),
    on_checkpoint: Option<&'cb mut dyn FnMut(&[BitRow], u64)>,
) -> Result<IndexOutcome, IndexError> {
    let engine = Engine::new(rom, action, params)?;
    let mut st = EngineState {
        engine: &engine,
        placed: Vec::with_capacity(params.v()),
        reps: Vec::with_capacity(engine.orbits.len()),
        pair_cov: vec![0u8; params.v() * params.v()],
        point_deg: vec![0u32; params.v()],
        nodes: 0,
        since_checkpoint: 0,
        truncated: false,
        resume: opts.resume_after.clone(),
        budget: opts.budget,
        checkpoint_every: opts.checkpoint_every,
        on_design,
        on_checkpoint,
    };
    st.place_orbit(0, true);
    Ok(IndexOutcome {
        complete: !st.truncated,
        nodes: st.nodes,
    })
}

/// Convenience wrapper collecting the stream.
pub fn index_designs(
    rom: Option<&RefinedOrbitMatrix>,
    action: &GroupAction,
    params: &DesignParams,
    budget: Option<u64>,
) -> Result<(Vec<IncidenceMatrix>, IndexOutcome), IndexError> {
    let mut out = Vec::new();
    let outcome = index_with(
        rom,
        action,
        params,
        &IndexOptions { budget, ..Default::default() },
        &mut |d| out.push(d.clone()),
        None,
    )?;
    Ok((out, outcome))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CollapseError {
    NotAnAutomorphism,
    ShapeMismatch,
}

impl fmt::Display for CollapseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CollapseError::NotAnAutomorphism => {
                write!(f, "the action is not an automorphism of the design")
            }
            CollapseError::ShapeMismatch => write!(f, "action and design sizes differ"),
        }
    }
}

/// Tactical decomposition of a design under the action's orbits: entry
/// (I,J) counts the points of point-orbit J on the first block of block
/// orbit I. Inverse consistency check of indexing.
pub fn collapse(design: &IncidenceMatrix, action: &GroupAction) -> Result<OrbitMatrix, CollapseError> {
    if action.v() != design.v() {
        return Err(CollapseError::ShapeMismatch);
    }
    let pair = AutomorphismPair {
        point_perm: action.point_rho.clone(),
        block_perm: action.block_rho.clone(),
    };
    match crate::design::is_automorphism(design, &pair) {
        Ok(true) => {}
        _ => return Err(CollapseError::NotAnAutomorphism),
    }
    let n = action.orbit_count();
    let structure = OrbitStructure::new(
        action.orbit_sizes.clone(),
        action.orbit_sizes.clone(),
        action.order() as u32,
    )
    .map_err(|_| CollapseError::ShapeMismatch)?;
    let mut entries = Vec::with_capacity(n * n);
    for bi in 0..n {
        let rep = design.row(action.orbit_start(bi));
        for pj in 0..n {
            let start = action.orbit_start(pj);
            let len = action.orbit_sizes[pj] as usize;
            let count = (start..start + len).filter(|&x| rep.get(x)).count();
            entries.push(count as u8);
        }
    }
    Ok(OrbitMatrix::new(structure, entries))
}

/// One decision unit of a representative-block search: an orbit of child
/// point cells under the block stabilizer, with the admissible point
/// masks.
struct Unit {
    /// candidate point masks, ascending; sizes in lockstep
    choices: Vec<BitRow>,
    sizes: Vec<u32>,
    min_size: u32,
    max_size: u32,
}

struct OrbitTask {
    length: usize,
    units: Vec<Unit>,
    /// per cell, the required intersection count (rom mode)
    profile: Option<Vec<u8>>,
    /// nearest earlier orbit with identical constraints, if any
    prev_identical: Option<usize>,
}

struct Engine<'a> {
    params: &'a DesignParams,
    action: &'a GroupAction,
    cells: Vec<Vec<usize>>,
    cell_masks: Vec<BitRow>,
    orbits: Vec<OrbitTask>,
}

impl<'a> Engine<'a> {
    fn new(
        rom: Option<&RefinedOrbitMatrix>,
        action: &'a GroupAction,
        params: &'a DesignParams,
    ) -> Result<Engine<'a>, IndexError> {
        let v = params.v();
        let sizes = action.orbit_sizes();

        // Constraint cells: child point orbits in rom mode, single points
        // otherwise (the free mode is only used for small oracle cases).
        let cells: Vec<Vec<usize>> = match rom {
            Some(r) => {
                let parent_structure = r.map.parent.structure();
                if parent_structure.point_sizes() != sizes {
                    return Err(IndexError::ActionMismatch);
                }
                child_point_cells(parent_structure, r.map.p, r.map.q)
            }
            None => (0..v).map(|x| vec![x]).collect(),
        };
        let cell_masks: Vec<BitRow> = cells
            .iter()
            .map(|c| BitRow::from_ones(v, c.iter().copied()))
            .collect();
        let mut cell_of_point = vec![usize::MAX; v];
        for (ci, cell) in cells.iter().enumerate() {
            for &x in cell {
                cell_of_point[x] = ci;
            }
        }

        let mut orbits = Vec::with_capacity(sizes.len());
        for (bi, &len) in sizes.iter().enumerate() {
            let len = len as usize;
            let stab = action.point_rho.pow(len);
            let profile: Option<Vec<u8>> = rom.map(|r| {
                let a0 = r.map.row_split[bi][0];
                (0..cells.len()).map(|b| r.matrix.get(a0, b)).collect()
            });
            let units = build_units(&cells, &cell_of_point, &stab, profile.as_deref(), v)
                .map_err(|_| IndexError::InconsistentProfile { orbit: bi })?;
            orbits.push(OrbitTask { length: len, units, profile, prev_identical: None });
        }
        // Identical-constraint orbits: same length and same profile row.
        for i in 0..orbits.len() {
            for j in (0..i).rev() {
                let same = orbits[j].length == orbits[i].length
                    && orbits[j].profile == orbits[i].profile;
                if same {
                    orbits[i].prev_identical = Some(j);
                    break;
                }
            }
        }
        Ok(Engine { params, action, cells, cell_masks, orbits })
    }

    /// Intersection counts of a block with every constraint cell.
    fn profile_of(&self, block: &BitRow) -> Vec<u8> {
        self.cell_masks
            .iter()
            .map(|m| block.intersection_count(m) as u8)
            .collect()
    }
}

/// Builds the decision units for one block orbit: orbits of constraint
/// cells under the stabilizer, with all admissible invariant subsets.
fn build_units(
    cells: &[Vec<usize>],
    cell_of_point: &[usize],
    stab: &Permutation,
    profile: Option<&[u8]>,
    v: usize,
) -> Result<Vec<Unit>, ()> {
    let mut visited = vec![false; cells.len()];
    let mut units = Vec::new();
    for c0 in 0..cells.len() {
        if visited[c0] {
            continue;
        }
        // follow the stabilizer orbit of the cell
        let mut orbit_cells = vec![c0];
        visited[c0] = true;
        let mut cur = c0;
        loop {
            let img = cell_of_point[stab.image(cells[cur][0])];
            if img == c0 {
                break;
            }
            debug_assert!(!visited[img]);
            visited[img] = true;
            orbit_cells.push(img);
            cur = img;
        }
        let u = orbit_cells.len();
        if let Some(p) = profile {
            // profile must be constant on the unit
            if orbit_cells.iter().any(|&c| p[c] != p[c0]) {
                return Err(());
            }
        }
        let rep = &cells[c0];
        let stab_u = stab_pow(stab, u);
        // Enumerate subsets of the representative cell, invariant under
        // the cell stabilizer, of the required size (all sizes in free
        // mode), then close under the stabilizer across the unit.
        let mut choices: Vec<BitRow> = Vec::new();
        let mut sizes: Vec<u32> = Vec::new();
        let want: Option<u32> = profile.map(|p| p[c0] as u32);
        for mask in 0u32..(1u32 << rep.len()) {
            let count = mask.count_ones();
            if let Some(w) = want {
                if count != w {
                    continue;
                }
            }
            let subset: Vec<usize> = rep
                .iter()
                .enumerate()
                .filter(|&(m, _)| mask >> m & 1 == 1)
                .map(|(_, &x)| x)
                .collect();
            let x = BitRow::from_ones(v, subset.iter().copied());
            // invariance under the cell stabilizer
            if stab_u.apply_to_row(&x) != x {
                continue;
            }
            // close across the unit
            let mut full = x.clone();
            let mut img = x;
            for _ in 1..u {
                img = stab.apply_to_row(&img);
                full.or_with(&img);
            }
            choices.push(full);
            sizes.push(count * u as u32);
        }
        // deterministic candidate order
        let mut idx: Vec<usize> = (0..choices.len()).collect();
        idx.sort_by(|&a, &b| choices[a].cmp(&choices[b]));
        let choices: Vec<BitRow> = idx.iter().map(|&i| choices[i].clone()).collect();
        let sizes: Vec<u32> = idx.iter().map(|&i| sizes[i]).collect();
        // a unit with no admissible subset leaves the loop in choose_unit
        // empty and kills the orbit, which is the correct outcome
        let min_size = sizes.iter().copied().min().unwrap_or(0);
        let max_size = sizes.iter().copied().max().unwrap_or(0);
        units.push(Unit { choices, sizes, min_size, max_size });
    }
    Ok(units)
}

fn stab_pow(stab: &Permutation, u: usize) -> Permutation {
    stab.pow(u)
}

struct EngineState<'a, 'b> {
    engine: &'a Engine<'a>,
    /// all blocks placed so far (whole orbits)
    placed: Vec<BitRow>,
    /// chosen representative per completed orbit
    reps: Vec<BitRow>,
    pair_cov: Vec<u8>,
    point_deg: Vec<u32>,
    nodes: u64,
    since_checkpoint: u64,
    truncated: bool,
    resume: Option<Vec<BitRow>>,
    budget: Option<u64>,
    checkpoint_every: Option<u64>,
    on_design: &'b mut dyn FnMut(&IncidenceMatrix),
    on_checkpoint: Option<&'b mut dyn FnMut(&[BitRow], u64)>,
}

impl<'a, 'b> EngineState<'a, 'b> {
    fn place_orbit(&mut self, oi: usize, resuming: bool) {
        if self.truncated {
            return;
        }
        let n_orbits = self.engine.orbits.len();
        if oi == n_orbits {
            self.emit();
            return;
        }
        let v = self.engine.params.v();
        let k = self.engine.params.k() as u32;
        let units = &self.engine.orbits[oi].units;
        // per-placed-row suffix bounds on achievable intersection
        let placed_n = self.placed.len();
        let mut suffmax = vec![vec![0u32; units.len() + 1]; placed_n];
        let mut suffmin = vec![vec![0u32; units.len() + 1]; placed_n];
        for (r, row) in self.placed.iter().enumerate() {
            for ui in (0..units.len()).rev() {
                let mut mx = 0u32;
                let mut mn = u32::MAX;
                for ch in &units[ui].choices {
                    let c = ch.intersection_count(row) as u32;
                    mx = mx.max(c);
                    mn = mn.min(c);
                }
                if units[ui].choices.is_empty() {
                    mn = 0;
                }
                suffmax[r][ui] = suffmax[r][ui + 1] + mx;
                suffmin[r][ui] = suffmin[r][ui + 1] + mn;
            }
        }
        let mut size_sufmax = vec![0u32; units.len() + 1];
        let mut size_sufmin = vec![0u32; units.len() + 1];
        for ui in (0..units.len()).rev() {
            size_sufmax[ui] = size_sufmax[ui + 1] + units[ui].max_size;
            size_sufmin[ui] = size_sufmin[ui + 1] + units[ui].min_size;
        }
        let mut cand = BitRow::zero(v);
        let mut inters = vec![0u32; placed_n];
        let bounds = UnitBounds { suffmax, suffmin, size_sufmax, size_sufmin };
        self.choose_unit(oi, 0, &mut cand, 0, k, &mut inters, &bounds, resuming);
    }

    #[allow(clippy::too_many_arguments)]
    fn choose_unit(
        &mut self,
        oi: usize,
        ui: usize,
        cand: &mut BitRow,
        size: u32,
        k: u32,
        inters: &mut Vec<u32>,
        bounds: &UnitBounds,
        resuming: bool,
    ) {
        if self.truncated {
            return;
        }
        let lambda = self.engine.params.lambda() as u32;
        let units = &self.engine.orbits[oi].units;
        if ui == units.len() {
            if size != k {
                return;
            }
            if inters.iter().any(|&c| c != lambda) {
                return;
            }
            self.complete_orbit(oi, cand.clone(), resuming);
            return;
        }
        let n_choices = units[ui].choices.len();
        for ci in 0..n_choices {
            let mask = &units[ui].choices[ci];
            let add = units[ui].sizes[ci];
            let size2 = size + add;
            if size2 > k
                || size2 + bounds.size_sufmax[ui + 1] < k
                || size2 + bounds.size_sufmin[ui + 1] > k
            {
                continue;
            }
            let mut ok = true;
            for (r, row) in self.placed.iter().enumerate() {
                let c2 = inters[r] + mask.intersection_count(row) as u32;
                if c2 > lambda
                    || c2 + bounds.suffmax[r][ui + 1] < lambda
                    || c2 + bounds.suffmin[r][ui + 1] > lambda
                {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            for (r, row) in self.placed.iter().enumerate() {
                inters[r] += mask.intersection_count(row) as u32;
            }
            cand.or_with(mask);
            self.choose_unit(oi, ui + 1, cand, size2, k, inters, bounds, resuming);
            // revert
            for x in mask.ones() {
                cand.set(x, false);
            }
            for (r, row) in self.placed.iter().enumerate() {
                inters[r] -= mask.intersection_count(row) as u32;
            }
            if self.truncated {
                return;
            }
        }
    }

    /// Candidate block complete: within-orbit checks, translate pinning,
    /// duplicate-orbit ordering, then place the orbit and recurse.
    fn complete_orbit(&mut self, oi: usize, rep: BitRow, resuming: bool) {
        let engine = self.engine;
        let lambda = engine.params.lambda();
        let length = engine.orbits[oi].length;
        let rho = engine.action.point_rho();

        // Resume filtering: skip everything at or before the recorded
        // completed path.
        let mut resume_down = false;
        if resuming {
            if let Some(path) = &self.resume {
                if oi >= path.len() {
                    return; // whole subtree below the path already done
                }
                match rep.cmp(&path[oi]) {
                    core::cmp::Ordering::Less => return,
                    core::cmp::Ordering::Equal => resume_down = true,
                    core::cmp::Ordering::Greater => {}
                }
            }
        }

        let mut translates: Vec<BitRow> = Vec::with_capacity(length);
        translates.push(rep.clone());
        for _ in 1..length {
            let prev = translates.last().unwrap();
            translates.push(rho.apply_to_row(prev));
        }
        // pairs within the orbit
        for tr in translates.iter().skip(1) {
            if rep.intersection_count(tr) != lambda {
                return;
            }
        }
        // pinning: the representative is the smallest translate with the
        // same constraint profile (without a profile, smallest outright)
        let profile = engine.orbits[oi].profile.as_ref().map(|_| engine.profile_of(&rep));
        for tr in translates.iter().skip(1) {
            if tr < &rep {
                match &profile {
                    None => return,
                    Some(p) => {
                        if &engine.profile_of(tr) == p {
                            return;
                        }
                    }
                }
            }
        }
        // duplicate-constraint orbits must carry ascending representatives
        if let Some(j) = engine.orbits[oi].prev_identical {
            if rep <= self.reps[j] {
                return;
            }
        }
        // apply pair-coverage and degree counters for the whole orbit,
        // then verify the bounds
        let v = engine.params.v();
        let k = engine.params.k() as u32;
        let mut ok = true;
        for row in &translates {
            let pts: Vec<usize> = row.ones().collect();
            for a in 0..pts.len() {
                for b in (a + 1)..pts.len() {
                    let idx = pts[a] * v + pts[b];
                    self.pair_cov[idx] += 1;
                    if self.pair_cov[idx] as usize > lambda {
                        ok = false;
                    }
                }
            }
            for &x in &pts {
                self.point_deg[x] += 1;
                if self.point_deg[x] > k {
                    ok = false;
                }
            }
        }
        if ok {
            self.nodes += 1;
            self.since_checkpoint += 1;
            if let Some(b) = self.budget {
                if self.nodes > b {
                    self.truncated = true;
                }
            }
            if !self.truncated {
                let placed_before = self.placed.len();
                self.placed.extend(translates.iter().cloned());
                self.reps.push(rep);
                self.place_orbit(oi + 1, resume_down);
                let rep_back = self.reps.pop().unwrap();
                self.placed.truncate(placed_before);
                // checkpoint on subtree completion
                if !self.truncated && self.checkpoint_every.is_some_and(|e| self.since_checkpoint >= e)
                {
                    if let Some(cb) = self.on_checkpoint.as_deref_mut() {
                        let mut path = self.reps.clone();
                        path.push(rep_back);
                        cb(&path, self.nodes);
                        self.since_checkpoint = 0;
                    }
                }
            }
        }
        // revert counters symmetrically
        for row in &translates {
            let pts: Vec<usize> = row.ones().collect();
            for a in 0..pts.len() {
                for b in (a + 1)..pts.len() {
                    self.pair_cov[pts[a] * v + pts[b]] -= 1;
                }
            }
            for &x in &pts {
                self.point_deg[x] -= 1;
            }
        }
    }

    fn emit(&mut self) {
        let params = *self.engine.params;
        let rows = self.placed.clone();
        let design = match IncidenceMatrix::new(params, rows) {
            Ok(d) => d,
            Err(_) => return,
        };
        // Emitted designs must validate and admit the action; the search
        // invariants guarantee it, and the filter stays as a hard gate.
        if !design.validate().is_ok() {
            debug_assert!(false, "search emitted an invalid design");
            return;
        }
        let pair = AutomorphismPair {
            point_perm: self.engine.action.point_rho().clone(),
            block_perm: self.engine.action.block_rho().clone(),
        };
        if crate::design::is_automorphism(&design, &pair) != Ok(true) {
            debug_assert!(false, "search emitted a design not admitting the action");
            return;
        }
        debug_assert_eq!(
            pair.point_perm.fixed_point_count(),
            pair.block_perm.fixed_point_count()
        );
        (self.on_design)(&design);
    }
}

struct UnitBounds {
    suffmax: Vec<Vec<u32>>,
    suffmin: Vec<Vec<u32>>,
    size_sufmax: Vec<u32>,
    size_sufmin: Vec<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::testutil::fano;

    fn params_fano() -> DesignParams {
        DesignParams::new(7, 3, 1).unwrap()
    }

    #[test]
    fn build_action_flagship_signature() {
        let dist = OrbitDistribution { d1: 2, dp: 1, dq: 4, dpq: 9 };
        let action = build_action(&dist, 2, 3);
        assert_eq!(action.v(), 70);
        assert_eq!(action.order(), 6);
        // ρ³ fixes 2 + 4·3 = 14 points, ρ² fixes 2 + 2 = 4 points.
        assert_eq!(action.point_rho().pow(3).fixed_point_count(), 14);
        assert_eq!(action.point_rho().pow(2).fixed_point_count(), 4);
    }

    #[test]
    fn build_action_identity_for_degenerate_distribution() {
        let dist = OrbitDistribution { d1: 70, dp: 0, dq: 0, dpq: 0 };
        let action = build_action(&dist, 2, 3);
        assert!(action.point_rho().is_identity());
    }

    #[test]
    fn trivial_action_enumerates_labeled_fano_planes() {
        // Independent oracle (written first): enumerate all 7-block
        // systems with pairwise intersection 1 by direct backtracking
        // over sorted block sets.
        let oracle = count_labeled_fanos_oracle();
        assert_eq!(oracle, 30);

        let action = GroupAction::trivial(7);
        let (designs, outcome) =
            index_designs(None, &action, &params_fano(), None).unwrap();
        assert!(outcome.complete);
        assert_eq!(designs.len(), 30);
        for d in &designs {
            assert!(d.validate().is_ok());
        }
    }

    /// Brute-force enumeration of labeled Fano planes: choose 7 blocks
    /// (as 3-subsets of 7 points, in increasing order) with all pairwise
    /// intersections 1 and every point on 3 blocks.
    fn count_labeled_fanos_oracle() -> usize {
        let blocks: Vec<u8> = {
            let mut out = Vec::new();
            for a in 0..7u8 {
                for b in (a + 1)..7 {
                    for c in (b + 1)..7 {
                        out.push(1 << a | 1 << b | 1 << c);
                    }
                }
            }
            out
        };
        fn rec(blocks: &[u8], chosen: &mut Vec<u8>, from: usize, count: &mut usize) {
            if chosen.len() == 7 {
                let mut deg = [0u32; 7];
                for &b in chosen.iter() {
                    for (x, d) in deg.iter_mut().enumerate() {
                        *d += (b >> x & 1) as u32;
                    }
                }
                if deg.iter().all(|&d| d == 3) {
                    *count += 1;
                }
                return;
            }
            for i in from..blocks.len() {
                let b = blocks[i];
                if chosen.iter().all(|&c| (c & b).count_ones() == 1) {
                    chosen.push(b);
                    rec(blocks, chosen, i + 1, count);
                    chosen.pop();
                }
            }
        }
        let mut count = 0;
        let mut chosen = Vec::new();
        rec(&blocks, &mut chosen, 0, &mut count);
        count
    }

    #[test]
    fn singer_indexing_yields_two_difference_set_classes() {
        // Oracle recorded first: 3-subsets of Z7 that are perfect
        // difference sets fall into exactly 2 translate classes.
        let mut classes: Vec<alloc::collections::BTreeSet<u8>> = Vec::new();
        for a in 0..7u8 {
            for b in (a + 1)..7 {
                for c in (b + 1)..7 {
                    let set = [a, b, c];
                    let mut diffs = [0u8; 7];
                    for &x in &set {
                        for &y in &set {
                            if x != y {
                                diffs[((7 + x - y) % 7) as usize] += 1;
                            }
                        }
                    }
                    if (1..7).all(|d| diffs[d] == 1) {
                        let canon: alloc::collections::BTreeSet<u8> = (0..7)
                            .map(|t| {
                                set.iter().map(|&x| (x + t) % 7).collect::<alloc::collections::BTreeSet<u8>>()
                            })
                            .min()
                            .unwrap();
                        if !classes.contains(&canon) {
                            classes.push(canon);
                        }
                    }
                }
            }
        }
        assert_eq!(classes.len(), 2);

        let action = GroupAction::from_orbit_sizes(&[7]);
        let (designs, outcome) =
            index_designs(None, &action, &params_fano(), None).unwrap();
        assert!(outcome.complete);
        assert_eq!(designs.len(), 2);
        for d in &designs {
            assert!(d.validate().is_ok());
            let om = collapse(d, &action).unwrap();
            assert_eq!(om.entries(), &[3]);
        }
    }

    #[test]
    fn collapse_identity_action_returns_design_entries() {
        let m = fano();
        let action = GroupAction::trivial(7);
        let om = collapse(&m, &action).unwrap();
        assert_eq!(om.n(), 7);
        for i in 0..7 {
            for j in 0..7 {
                assert_eq!(om.get(i, j) == 1, m.get(i, j));
            }
        }
    }

    #[test]
    fn collapse_rejects_non_automorphism() {
        let m = fano();
        let action = GroupAction::from_orbit_sizes(&[1, 1, 1, 1, 1, 2]);
        assert_eq!(
            collapse(&m, &action),
            Err(CollapseError::NotAnAutomorphism)
        );
    }

    #[test]
    fn budget_truncation_reported() {
        let action = GroupAction::trivial(7);
        let mut n = 0usize;
        let outcome = index_with(
            None,
            &action,
            &params_fano(),
            &IndexOptions { budget: Some(5), ..Default::default() },
            &mut |_| n += 1,
            None,
        )
        .unwrap();
        assert!(!outcome.complete);
    }
}
