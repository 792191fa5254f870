//! Incidence structures, permutation actions, duality, and the design
//! axioms. Everything downstream validates against this module.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitRow;

/// Parameters (v, k, λ) of a symmetric 2-design.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct DesignParams {
    v: usize,
    k: usize,
    lambda: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParamsError {
    /// k(k−1) ≠ λ(v−1).
    Inadmissible { v: usize, k: usize, lambda: usize },
    /// Violates 0 < λ < k < v−1.
    Trivial { v: usize, k: usize, lambda: usize },
}

impl fmt::Display for ParamsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ParamsError::Inadmissible { v, k, lambda } => write!(
                f,
                "({v},{k},{lambda}) inadmissible: k(k-1) != lambda(v-1)"
            ),
            ParamsError::Trivial { v, k, lambda } => {
                write!(f, "({v},{k},{lambda}) violates 0 < lambda < k < v-1")
            }
        }
    }
}

impl DesignParams {
    pub fn new(v: usize, k: usize, lambda: usize) -> Result<Self, ParamsError> {
        if !(0 < lambda && lambda < k && k < v.saturating_sub(1)) {
            return Err(ParamsError::Trivial { v, k, lambda });
        }
        if k * (k - 1) != lambda * (v - 1) {
            return Err(ParamsError::Inadmissible { v, k, lambda });
        }
        Ok(DesignParams { v, k, lambda })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// The order n = k − λ of the design.
    pub fn order(&self) -> usize {
        self.k - self.lambda
    }
}

/// Structural (pre-axiom) problems with an incidence matrix.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShapeError {
    RowCount { expected: usize, got: usize },
    RowLength { row: usize, expected: usize, got: usize },
}

impl fmt::Display for ShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ShapeError::RowCount { expected, got } => {
                write!(f, "expected {expected} rows, got {got}")
            }
            ShapeError::RowLength { row, expected, got } => {
                write!(f, "row {row}: expected length {expected}, got {got}")
            }
        }
    }
}

/// First offending witness per violated design axiom.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AxiomViolation {
    RowSum { row: usize, got: usize },
    ColumnSum { column: usize, got: usize },
    RowIntersection { a: usize, b: usize, got: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            AxiomViolation::RowSum { row, got } => write!(f, "row {row} has sum {got}"),
            AxiomViolation::ColumnSum { column, got } => {
                write!(f, "column {column} has sum {got}")
            }
            AxiomViolation::RowIntersection { a, b, got } => {
                write!(f, "rows {a},{b} intersect in {got} points")
            }
        }
    }
}

/// Result of [`IncidenceMatrix::validate`]: empty means all axioms hold.
/// At most one witness per axiom kind is reported (the first found).
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A v×v 0/1 incidence matrix; rows are blocks, columns are points.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IncidenceMatrix {
    params: DesignParams,
    rows: Vec<BitRow>,
}

impl IncidenceMatrix {
    pub fn new(params: DesignParams, rows: Vec<BitRow>) -> Result<Self, ShapeError> {
        if rows.len() != params.v() {
            return Err(ShapeError::RowCount {
                expected: params.v(),
                got: rows.len(),
            });
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != params.v() {
                return Err(ShapeError::RowLength {
                    row: i,
                    expected: params.v(),
                    got: r.len(),
                });
            }
        }
        Ok(IncidenceMatrix { params, rows })
    }

    pub fn params(&self) -> DesignParams {
        self.params
    }

    pub fn v(&self) -> usize {
        self.params.v()
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitRow {
        &self.rows[i]
    }

    #[inline]
    pub fn get(&self, block: usize, point: usize) -> bool {
        self.rows[block].get(point)
    }

    /// Transpose. For a symmetric design this is again a design with the
    /// same parameters, and `dual(dual(m)) == m` bit-exactly.
    pub fn dual(&self) -> IncidenceMatrix {
        let v = self.v();
        let mut rows = vec![BitRow::zero(v); v];
        for i in 0..v {
            for j in self.rows[i].ones() {
                rows[j].set(i, true);
            }
        }
        IncidenceMatrix {
            params: self.params,
            rows,
        }
    }

    /// Checks the three design axioms exhaustively: every row sums to k,
    /// every column sums to k, and any two distinct rows meet in λ points.
    pub fn validate(&self) -> ValidationReport {
        let (v, k, lambda) = (self.params.v(), self.params.k(), self.params.lambda());
        let mut report = ValidationReport::default();
        if let Some((row, got)) = (0..v)
            .map(|i| (i, self.rows[i].count_ones()))
            .find(|&(_, s)| s != k)
        {
            report.violations.push(AxiomViolation::RowSum { row, got });
        }
        'cols: for j in 0..v {
            let mut got = 0;
            for i in 0..v {
                got += self.rows[i].get(j) as usize;
            }
            if got != k {
                report
                    .violations
                    .push(AxiomViolation::ColumnSum { column: j, got });
                break 'cols;
            }
        }
        'pairs: for a in 0..v {
            for b in (a + 1)..v {
                let got = self.rows[a].intersection_count(&self.rows[b]);
                if got != lambda {
                    report
                        .violations
                        .push(AxiomViolation::RowIntersection { a, b, got });
                    break 'pairs;
                }
            }
        }
        report
    }
}

/// Validates the design axioms; see [`IncidenceMatrix::validate`].
pub fn validate_design(m: &IncidenceMatrix) -> ValidationReport {
    m.validate()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PermutationError {
    NotBijective { index: usize },
    OutOfRange { index: usize, image: usize },
}

impl fmt::Display for PermutationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PermutationError::NotBijective { index } => {
                write!(f, "image of {index} repeats an earlier image")
            }
            PermutationError::OutOfRange { index, image } => {
                write!(f, "image {image} of {index} out of range")
            }
        }
    }
}

/// A bijection on {0..n−1}, stored as the image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u16).collect(),
        }
    }

    pub fn new(images: Vec<u16>) -> Result<Self, PermutationError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for (i, &img) in images.iter().enumerate() {
            let img = img as usize;
            if img >= n {
                return Err(PermutationError::OutOfRange { index: i, image: img });
            }
            if seen[img] {
                return Err(PermutationError::NotBijective { index: i });
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// self ∘ other: first apply `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.len(), other.len());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u16;
        }
        Permutation { images }
    }

    pub fn pow(&self, e: usize) -> Permutation {
        let mut out = Permutation::identity(self.len());
        for _ in 0..e {
            out = self.compose(&out);
        }
        out
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &x)| i == x as usize)
            .count()
    }

    /// Order of the permutation (lcm of its cycle lengths).
    pub fn order(&self) -> u64 {
        let mut order = 1u64;
        for c in self.cycles() {
            order = lcm(order, c.len() as u64);
        }
        order
    }

    pub fn cycles(&self) -> Vec<Vec<u16>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u16);
                x = self.image(x);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Image of a point set: bit i of the input lands on bit `image(i)`.
    pub fn apply_to_row(&self, row: &BitRow) -> BitRow {
        debug_assert_eq!(self.len(), row.len());
        let mut out = BitRow::zero(row.len());
        for i in row.ones() {
            out.set(self.image(i), true);
        }
        out
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Counts the fixed points of a permutation.
pub fn fixed_point_count(p: &Permutation) -> usize {
    p.fixed_point_count()
}

/// A simultaneous action on points (columns) and blocks (rows).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AutomorphismPair {
    pub point_perm: Permutation,
    pub block_perm: Permutation,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LengthMismatch {
    pub expected: usize,
    pub point_len: usize,
    pub block_len: usize,
}

impl fmt::Display for LengthMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "permutation lengths {}/{} do not match v = {}",
            self.point_len, self.block_len, self.expected
        )
    }
}

/// True iff applying `point_perm` to columns and `block_perm` to rows
/// reproduces `m` exactly: row `block_perm(i)` equals the `point_perm`
/// image of row `i`, for every block `i`.
pub fn is_automorphism(m: &IncidenceMatrix, a: &AutomorphismPair) -> Result<bool, LengthMismatch> {
    let v = m.v();
    if a.point_perm.len() != v || a.block_perm.len() != v {
        return Err(LengthMismatch {
            expected: v,
            point_len: a.point_perm.len(),
            block_len: a.block_perm.len(),
        });
    }
    for i in 0..v {
        let mapped = a.point_perm.apply_to_row(m.row(i));
        if &mapped != m.row(a.block_perm.image(i)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// Fano plane from the difference set {1,2,4} mod 7: block i is
    /// {1+i, 2+i, 4+i}.
    pub(crate) fn fano() -> IncidenceMatrix {
        fano_from_base(&[1, 2, 4])
    }

    pub(crate) fn fano_from_base(base: &[usize]) -> IncidenceMatrix {
        let params = DesignParams::new(7, 3, 1).unwrap();
        let rows = (0..7)
            .map(|i| BitRow::from_ones(7, base.iter().map(move |&b| (b + i) % 7)))
            .collect();
        IncidenceMatrix::new(params, rows).unwrap()
    }

    /// Deterministic xorshift for relabeling tests.
    pub(crate) struct XorShift(pub u64);

    impl XorShift {
        pub(crate) fn next(&mut self) -> u64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            x
        }

        pub(crate) fn below(&mut self, n: usize) -> usize {
            (self.next() % n as u64) as usize
        }

        pub(crate) fn permutation(&mut self, n: usize) -> Permutation {
            let mut images: Vec<u16> = (0..n as u16).collect();
            for i in (1..n).rev() {
                let j = self.below(i + 1);
                images.swap(i, j);
            }
            Permutation::new(images).unwrap()
        }
    }

    pub(crate) fn relabel(
        m: &IncidenceMatrix,
        points: &Permutation,
        blocks: &Permutation,
    ) -> IncidenceMatrix {
        let v = m.v();
        let mut rows = alloc::vec![BitRow::zero(v); v];
        for i in 0..v {
            rows[blocks.image(i)] = points.apply_to_row(m.row(i));
        }
        IncidenceMatrix::new(m.params(), rows).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testutil::*;
    use super::*;

    #[test]
    fn fano_validates_by_brute_force_pair_counting() {
        let m = fano();
        // Independent oracle: count pairs over all 21 point pairs directly.
        for x in 0..7 {
            for y in (x + 1)..7 {
                let mut count = 0;
                for i in 0..7 {
                    if m.get(i, x) && m.get(i, y) {
                        count += 1;
                    }
                }
                assert_eq!(count, 1, "pair ({x},{y})");
            }
        }
        assert!(m.validate().is_ok());
    }

    #[test]
    fn all_zero_matrix_reports_row_sum_violation_at_row_0() {
        let params = DesignParams::new(7, 3, 1).unwrap();
        let rows = alloc::vec![BitRow::zero(7); 7];
        let m = IncidenceMatrix::new(params, rows).unwrap();
        let report = m.validate();
        assert!(!report.is_ok());
        assert!(matches!(
            report.violations[0],
            AxiomViolation::RowSum { row: 0, got: 0 }
        ));
    }

    #[test]
    fn shape_error_is_distinct_from_axiom_failure() {
        let params = DesignParams::new(7, 3, 1).unwrap();
        let rows = alloc::vec![BitRow::zero(7); 6];
        assert_eq!(
            IncidenceMatrix::new(params, rows),
            Err(ShapeError::RowCount { expected: 7, got: 6 })
        );
    }

    #[test]
    fn dual_is_involution() {
        let m = fano();
        assert_eq!(m.dual().dual(), m);
        assert!(m.dual().validate().is_ok());
    }

    #[test]
    fn validate_iff_dual_validates() {
        let mut m = fano();
        assert_eq!(m.validate().is_ok(), m.dual().validate().is_ok());
        // Break one entry; both sides must now fail.
        let mut rows: Vec<BitRow> = m.rows().to_vec();
        let flip = !rows[0].get(0);
        rows[0].set(0, flip);
        m = IncidenceMatrix::new(m.params(), rows).unwrap();
        assert_eq!(m.validate().is_ok(), m.dual().validate().is_ok());
        assert!(!m.validate().is_ok());
    }

    #[test]
    fn identity_pair_is_automorphism() {
        let m = fano();
        let id = AutomorphismPair {
            point_perm: Permutation::identity(7),
            block_perm: Permutation::identity(7),
        };
        assert_eq!(is_automorphism(&m, &id), Ok(true));
    }

    #[test]
    fn singer_cycle_is_automorphism_of_fano() {
        let m = fano();
        // x -> x+1 on points sends block {1+i,2+i,4+i} to {1+(i+1),...},
        // i.e. block i to block i+1.
        let point_perm =
            Permutation::new((0..7u16).map(|x| (x + 1) % 7).collect()).unwrap();
        let block_perm =
            Permutation::new((0..7u16).map(|x| (x + 1) % 7).collect()).unwrap();
        let pair = AutomorphismPair { point_perm, block_perm };
        assert_eq!(is_automorphism(&m, &pair), Ok(true));
        assert_eq!(pair.point_perm.order(), 7);
    }

    #[test]
    fn transposition_with_identity_blocks_is_not_automorphism() {
        let m = fano();
        let mut images: Vec<u16> = (0..7).collect();
        images.swap(0, 1);
        let pair = AutomorphismPair {
            point_perm: Permutation::new(images).unwrap(),
            block_perm: Permutation::identity(7),
        };
        assert_eq!(is_automorphism(&m, &pair), Ok(false));
    }

    #[test]
    fn automorphism_pair_fixed_point_counts_agree() {
        // For symmetric designs the point and block fixed counts of an
        // automorphism coincide; check on the Singer action's powers.
        let m = fano();
        let rho = Permutation::new((0..7u16).map(|x| (x + 1) % 7).collect()).unwrap();
        for e in 0..7 {
            let pair = AutomorphismPair {
                point_perm: rho.pow(e),
                block_perm: rho.pow(e),
            };
            assert_eq!(is_automorphism(&m, &pair), Ok(true));
            assert_eq!(
                pair.point_perm.fixed_point_count(),
                pair.block_perm.fixed_point_count()
            );
        }
    }

    #[test]
    fn identity_fixes_everything() {
        assert_eq!(Permutation::identity(70).fixed_point_count(), 70);
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::new(alloc::vec![1, 2, 0, 4, 3]).unwrap();
        assert_eq!(p.order(), 6);
        assert_eq!(p.fixed_point_count(), 0);
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.pow(6), Permutation::identity(5));
        assert!(Permutation::new(alloc::vec![0, 0, 1]).is_err());
        assert!(Permutation::new(alloc::vec![0, 3]).is_err());
    }
}
