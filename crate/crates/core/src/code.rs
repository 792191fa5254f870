//! GF(2) linear-algebra analysis of designs: 2-rank, fixed-weight
//! codeword enumeration by Gray-code walk, and complete search for
//! designs embedded in a code invariant under a prescribed subgroup.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitRow;
use crate::design::{DesignParams, IncidenceMatrix, Permutation};

/// GF(2) row space of an incidence matrix in reduced row-echelon form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryCode {
    length: usize,
    basis: Vec<BitRow>,
}

impl BinaryCode {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Reduced row-echelon basis, pivot columns strictly increasing.
    pub fn basis(&self) -> &[BitRow] {
        &self.basis
    }

    /// Spans arbitrary generators (reduced echelon form).
    pub fn from_generators(length: usize, rows: impl IntoIterator<Item = BitRow>) -> BinaryCode {
        let mut basis: Vec<BitRow> = Vec::new();
        for row in rows {
            debug_assert_eq!(row.len(), length);
            let mut r = row;
            reduce(&basis, &mut r);
            if !r.is_zero() {
                basis.push(r);
                basis.sort_by_key(|b| b.first_one());
                // re-reduce upward to keep the reduced form
                let snapshot = core::mem::take(&mut basis);
                for row in snapshot {
                    let mut r = row;
                    reduce(&basis, &mut r);
                    if !r.is_zero() {
                        basis.push(r);
                    }
                }
                basis.sort_by_key(|b| b.first_one());
            }
        }
        BinaryCode { length, basis }
    }

    /// Membership test: reduces the word by the basis.
    pub fn contains(&self, word: &BitRow) -> bool {
        let mut r = word.clone();
        reduce(&self.basis, &mut r);
        r.is_zero()
    }
}

fn reduce(basis: &[BitRow], r: &mut BitRow) {
    for b in basis {
        if let Some(p) = b.first_one() {
            if r.get(p) {
                r.xor_with(b);
            }
        }
    }
}

/// Dimension of the GF(2) row space of the incidence matrix.
pub fn rank2(m: &IncidenceMatrix) -> usize {
    span_code(m).dimension()
}

/// The binary code spanned by the incidence vectors of the blocks.
pub fn span_code(m: &IncidenceMatrix) -> BinaryCode {
    BinaryCode::from_generators(m.v(), m.rows().iter().cloned())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CodeError {
    /// 2^dimension exceeds the enumeration budget.
    BudgetExceeded { dimension: usize, budget: u64 },
    /// A subgroup generator does not preserve the code.
    GeneratorDoesNotPreserveCode { generator: usize },
    /// Generator length differs from the code length.
    GeneratorLength { generator: usize },
}

impl fmt::Display for CodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CodeError::BudgetExceeded { dimension, budget } => {
                write!(f, "2^{dimension} codewords exceed the budget {budget}")
            }
            CodeError::GeneratorDoesNotPreserveCode { generator } => {
                write!(f, "generator {generator} does not map the code to itself")
            }
            CodeError::GeneratorLength { generator } => {
                write!(f, "generator {generator} has the wrong length")
            }
        }
    }
}

/// Orbit statistics of the weight class under a prescribed subgroup.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrbitSummary {
    pub orbit_count: u64,
    /// (orbit size, number of orbits), sorted by size
    pub size_histogram: Vec<(u64, u64)>,
}

/// Exact census of the codewords of one weight.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightClassReport {
    pub weight: usize,
    pub count: u64,
    pub orbit_summary: Option<OrbitSummary>,
}

/// Exact count of weight-w codewords by Gray-code full enumeration.
/// `budget` bounds the number of enumerated words (2^dimension must fit).
pub fn weight_count(
    code: &BinaryCode,
    w: usize,
    subgroup: Option<&[Permutation]>,
    budget: u64,
) -> Result<WeightClassReport, CodeError> {
    let d = code.dimension();
    if d >= 63 || (1u64 << d) > budget {
        return Err(CodeError::BudgetExceeded { dimension: d, budget });
    }
    if let Some(gens) = subgroup {
        validate_generators(code, gens)?;
    }
    let mut count = 0u64;
    let mut collected: Vec<BitRow> = Vec::new();
    let mut word = BitRow::zero(code.length());
    if w == 0 {
        count += 1;
        if subgroup.is_some() {
            collected.push(word.clone());
        }
    }
    let total: u64 = 1u64 << d;
    for i in 1..total {
        let bit = i.trailing_zeros() as usize;
        word.xor_with(&code.basis[bit]);
        if word.count_ones() == w {
            count += 1;
            if subgroup.is_some() {
                collected.push(word.clone());
            }
        }
    }
    let orbit_summary = subgroup.map(|gens| summarize_orbits(&collected, gens));
    Ok(WeightClassReport { weight: w, count, orbit_summary })
}

fn validate_generators(code: &BinaryCode, gens: &[Permutation]) -> Result<(), CodeError> {
    for (i, g) in gens.iter().enumerate() {
        if g.len() != code.length() {
            return Err(CodeError::GeneratorLength { generator: i });
        }
        for b in code.basis() {
            if !code.contains(&g.apply_to_row(b)) {
                return Err(CodeError::GeneratorDoesNotPreserveCode { generator: i });
            }
        }
    }
    Ok(())
}

fn orbit_of(word: &BitRow, gens: &[Permutation]) -> Vec<BitRow> {
    let mut orbit = vec![word.clone()];
    let mut frontier = vec![word.clone()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = g.apply_to_row(&x);
            if !orbit.contains(&y) {
                orbit.push(y.clone());
                frontier.push(y);
            }
        }
    }
    orbit.sort();
    orbit
}

fn summarize_orbits(words: &[BitRow], gens: &[Permutation]) -> OrbitSummary {
    let mut seen: alloc::collections::BTreeSet<BitRow> = alloc::collections::BTreeSet::new();
    let mut sizes: BTreeMap<u64, u64> = BTreeMap::new();
    let mut orbit_count = 0;
    for w in words {
        if seen.contains(w) {
            continue;
        }
        let orbit = orbit_of(w, gens);
        orbit_count += 1;
        *sizes.entry(orbit.len() as u64).or_insert(0) += 1;
        for x in orbit {
            seen.insert(x);
        }
    }
    OrbitSummary { orbit_count, size_histogram: sizes.into_iter().collect() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeSearchOutcome {
    pub complete: bool,
    pub nodes: u64,
}

/// Complete search for 2-(v,k,λ) designs inside the code, invariant under
/// the subgroup generated by `h_gens`: all sets of v weight-k codewords,
/// closed under the subgroup, pairwise intersecting in λ, each point
/// covered k times. Emits the block sets as incidence matrices with rows
/// sorted ascending.
pub fn designs_in_code(
    code: &BinaryCode,
    params: &DesignParams,
    h_gens: &[Permutation],
    budget: u64,
) -> Result<(Vec<IncidenceMatrix>, CodeSearchOutcome), CodeError> {
    validate_generators(code, h_gens)?;
    let v = params.v();
    let k = params.k();
    let lambda = params.lambda();
    // all weight-k codewords
    let report = weight_count(code, k, None, budget)?;
    let d = code.dimension();
    let mut words: Vec<BitRow> = Vec::with_capacity(report.count as usize);
    let mut word = BitRow::zero(code.length());
    for i in 1..(1u64 << d) {
        let bit = i.trailing_zeros() as usize;
        word.xor_with(&code.basis[bit]);
        if word.count_ones() == k {
            words.push(word.clone());
        }
    }
    words.sort();
    // group into subgroup orbits; discard orbits with an internal pair
    // intersection other than λ (they cannot occur in a design)
    let mut seen: alloc::collections::BTreeSet<BitRow> = alloc::collections::BTreeSet::new();
    let mut orbits: Vec<Vec<BitRow>> = Vec::new();
    for w in &words {
        if seen.contains(w) {
            continue;
        }
        let orbit = orbit_of(w, h_gens);
        for x in &orbit {
            seen.insert(x.clone());
        }
        let internal_ok = (0..orbit.len()).all(|a| {
            ((a + 1)..orbit.len()).all(|b| orbit[a].intersection_count(&orbit[b]) == lambda)
        });
        if internal_ok && orbit.len() <= v {
            orbits.push(orbit);
        }
    }
    // pairwise-compatibility: every cross pair meets in λ (checking the
    // representative against the other orbit suffices by invariance)
    let n = orbits.len();
    let mut compat: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let ok = orbits[b]
                .iter()
                .all(|w| orbits[a][0].intersection_count(w) == lambda);
            compat[a][b] = ok;
            compat[b][a] = ok;
        }
    }
    let mut out: Vec<IncidenceMatrix> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut coverage = vec![0u32; v];
    let mut nodes = 0u64;
    let mut truncated = false;
    search_orbits(
        &orbits,
        &compat,
        params,
        0,
        0,
        &mut chosen,
        &mut coverage,
        &mut nodes,
        budget,
        &mut truncated,
        &mut out,
    );
    Ok((out, CodeSearchOutcome { complete: !truncated, nodes }))
}

#[allow(clippy::too_many_arguments)]
fn search_orbits(
    orbits: &[Vec<BitRow>],
    compat: &[Vec<bool>],
    params: &DesignParams,
    from: usize,
    placed: usize,
    chosen: &mut Vec<usize>,
    coverage: &mut Vec<u32>,
    nodes: &mut u64,
    budget: u64,
    truncated: &mut bool,
    out: &mut Vec<IncidenceMatrix>,
) {
    if *truncated {
        return;
    }
    let v = params.v();
    let k = params.k() as u32;
    if placed == v {
        let mut rows: Vec<BitRow> = chosen
            .iter()
            .flat_map(|&o| orbits[o].iter().cloned())
            .collect();
        rows.sort();
        if let Ok(m) = IncidenceMatrix::new(*params, rows) {
            if m.validate().is_ok() {
                out.push(m);
            }
        }
        return;
    }
    // remaining capacity bound
    let rest: usize = (from..orbits.len()).map(|o| orbits[o].len()).sum();
    if placed + rest < v {
        return;
    }
    for o in from..orbits.len() {
        if placed + orbits[o].len() > v {
            continue;
        }
        if chosen.iter().any(|&c| !compat[c][o]) {
            continue;
        }
        // coverage bound: no point may exceed k
        let mut ok = true;
        for w in &orbits[o] {
            for x in w.ones() {
                coverage[x] += 1;
                if coverage[x] > k {
                    ok = false;
                }
            }
        }
        if ok {
            *nodes += 1;
            if *nodes > budget {
                *truncated = true;
            } else {
                chosen.push(o);
                search_orbits(
                    orbits, compat, params, o + 1, placed + orbits[o].len(),
                    chosen, coverage, nodes, budget, truncated, out,
                );
                chosen.pop();
            }
        }
        for w in &orbits[o] {
            for x in w.ones() {
                coverage[x] -= 1;
            }
        }
        if *truncated {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::testutil::fano;

    #[test]
    fn fano_rank_is_4() {
        // Independent oracle: the span of the Fano rows has 16 distinct
        // vectors, so the dimension is 4.
        let m = fano();
        let mut span: alloc::collections::BTreeSet<Vec<u64>> =
            alloc::collections::BTreeSet::new();
        let mut frontier = alloc::vec![BitRow::zero(7)];
        span.insert(frontier[0].words().to_vec());
        while let Some(x) = frontier.pop() {
            for r in m.rows() {
                let mut y = x.clone();
                y.xor_with(r);
                if span.insert(y.words().to_vec()) {
                    frontier.push(y);
                }
            }
        }
        assert_eq!(span.len(), 16);
        assert_eq!(rank2(&m), 4);
    }

    #[test]
    fn fano_code_is_hamming_7_4() {
        let code = span_code(&fano());
        assert_eq!(code.dimension(), 4);
        // weight distribution (1,0,0,7,7,0,0,1) by full enumeration
        let expected = [1u64, 0, 0, 7, 7, 0, 0, 1];
        for (w, &want) in expected.iter().enumerate() {
            let report = weight_count(&code, w, None, 1 << 20).unwrap();
            assert_eq!(report.count, want, "weight {w}");
        }
        // distribution sums to 2^dimension
        let total: u64 = (0..=7)
            .map(|w| weight_count(&code, w, None, 1 << 20).unwrap().count)
            .sum();
        assert_eq!(total, 16);
    }

    #[test]
    fn zero_matrix_spans_dimension_0() {
        let code = BinaryCode::from_generators(7, core::iter::empty());
        assert_eq!(code.dimension(), 0);
        let report = weight_count(&code, 0, None, 1 << 10).unwrap();
        assert_eq!(report.count, 1);
    }

    #[test]
    fn budget_exceeded_is_explicit() {
        let code = span_code(&fano());
        assert_eq!(
            weight_count(&code, 3, None, 8),
            Err(CodeError::BudgetExceeded { dimension: 4, budget: 8 })
        );
    }

    #[test]
    fn hamming_code_contains_exactly_one_fano() {
        // The 7 weight-3 words of the Hamming [7,4] code pairwise meet in
        // one point and form exactly one 2-(7,3,1) design.
        let params = DesignParams::new(7, 3, 1).unwrap();
        let code = span_code(&fano());
        let (designs, outcome) = designs_in_code(&code, &params, &[], 1 << 20).unwrap();
        assert!(outcome.complete);
        assert_eq!(designs.len(), 1);
        assert!(designs[0].validate().is_ok());
        for row in designs[0].rows() {
            assert!(code.contains(row));
        }
    }

    #[test]
    fn generator_preservation_is_checked() {
        let code = span_code(&fano());
        // a transposition that does not preserve the Hamming code
        let mut images: Vec<u16> = (0..7).collect();
        images.swap(0, 1);
        let bad = Permutation::new(images).unwrap();
        let params = DesignParams::new(7, 3, 1).unwrap();
        match designs_in_code(&code, &params, &[bad], 1 << 20) {
            Err(CodeError::GeneratorDoesNotPreserveCode { .. }) => {}
            other => panic!("expected generator rejection, got {other:?}"),
        }
    }

    #[test]
    fn weight_count_with_subgroup_orbits() {
        let code = span_code(&fano());
        let rho = Permutation::new((0..7u16).map(|x| (x + 1) % 7).collect()).unwrap();
        let report = weight_count(&code, 3, Some(&[rho]), 1 << 20).unwrap();
        assert_eq!(report.count, 7);
        let summary = report.orbit_summary.unwrap();
        assert_eq!(summary.orbit_count, 1);
        assert_eq!(summary.size_histogram, alloc::vec![(7, 1)]);
    }
}
