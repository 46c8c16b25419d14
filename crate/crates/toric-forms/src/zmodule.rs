//! Exact integer linear algebra: dense matrices over arbitrary-precision
//! integers, Hermite and Smith normal forms, kernels, cokernels, linear
//! Diophantine systems, and equivariant section solving.
//!
//! Everything here is exact. There is no floating point anywhere in this
//! crate; all decisions downstream (cohomology groups, Hilbert bases,
//! invertibility verdicts) reduce to the normal forms computed here.
//!
//! Determinism: the Smith reduction always pivots on the entry of smallest
//! nonzero absolute value, breaking ties by lexicographic position, so a
//! given input matrix always produces the same decomposition.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Build from rows of machine integers (convenience for literals).
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().collect();
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Build a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> Self {
        let c = cols.len();
        let mut m = Self::zero(rows, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            v.len(),
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &v[j])
                    .sum::<BigInt>()
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|a| -a).collect();
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut m = Self::zero(self.rows + other.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..self.cols {
                m.set(self.rows + i, j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn submatrix(&self, row_ids: &[usize], col_ids: &[usize]) -> Self {
        let mut m = Self::zero(row_ids.len(), col_ids.len());
        for (i, &r) in row_ids.iter().enumerate() {
            for (j, &c) in col_ids.iter().enumerate() {
                m.set(i, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.smith().rank()
    }

    /// True when the matrix is square with determinant ±1.
    pub fn is_unimodular(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let s = self.smith();
        s.rank() == self.rows && s.diagonal().iter().all(|d| d.is_one())
    }

    /// Inverse of a unimodular matrix. Panics if not unimodular.
    pub fn inverse_unimodular(&self) -> Self {
        let s = self.smith();
        assert!(
            s.rank() == self.rows && s.diagonal().iter().all(|d| d.is_one()),
            "matrix is not unimodular"
        );
        // U A V = I  =>  A^{-1} = V U
        s.v.mul(&s.u)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[a] += q * row[b]
    fn add_row_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * self.get(b, j);
            let cur = self.get(a, j) + add;
            self.set(a, j, cur);
        }
    }

    /// col[a] += q * col[b]
    fn add_col_multiple(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * self.get(i, b);
            let cur = self.get(i, a) + add;
            self.set(i, a, cur);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, a);
            self.set(i, a, v);
        }
    }

    /// Smith normal form with transforms: returns (U, D, V) with U·A·V = D,
    /// U and V unimodular and D diagonal with d1 | d2 | … ≥ 0.
    pub fn smith(&self) -> SmithDecomposition {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let steps = self.rows.min(self.cols);

        for t in 0..steps {
            if !reduce_pivot_block(&mut d, &mut u, &mut v, t) {
                break; // remaining block is zero
            }
        }

        // Enforce the divisibility chain d_i | d_{i+1}. Merging a violating
        // pair puts gcd/lcm on the diagonal; repeat until stable.
        loop {
            let mut changed = false;
            let n = steps;
            for i in 0..n {
                if d.get(i, i).is_zero() {
                    continue;
                }
                for j in (i + 1)..n {
                    if d.get(j, j).is_zero() {
                        continue;
                    }
                    if d.get(j, j).mod_floor(d.get(i, i)).is_zero() {
                        continue;
                    }
                    // bring d_jj into column i and re-reduce from position i
                    let one = BigInt::one();
                    d.add_col_multiple(i, j, &one);
                    v.add_col_multiple(i, j, &one);
                    for t in i..n {
                        if !reduce_pivot_block(&mut d, &mut u, &mut v, t) {
                            break;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // Normalize signs.
        for t in 0..steps {
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
        }

        SmithDecomposition { u, d, v }
    }

    /// Column-style Hermite normal form: returns (H, V, pivots) with
    /// A·V = H, V unimodular. Pivot entries are positive, all entries to
    /// the right of a pivot in its row vanish, and entries to the left are
    /// reduced into [0, pivot). `pivots` lists (row, col) per pivot.
    pub fn hermite_columns(&self) -> (IntMatrix, IntMatrix, Vec<(usize, usize)>) {
        let mut h = self.clone();
        let mut v = IntMatrix::identity(self.cols);
        let mut pivots = Vec::new();
        let mut c = 0usize;

        for r in 0..self.rows {
            if c >= self.cols {
                break;
            }
            // Eliminate among columns c.. within row r until one nonzero remains.
            loop {
                let mut best: Option<usize> = None;
                for j in c..self.cols {
                    if h.get(r, j).is_zero() {
                        continue;
                    }
                    best = match best {
                        None => Some(j),
                        Some(b) => {
                            if h.get(r, j).abs() < h.get(r, b).abs() {
                                Some(j)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
                let Some(b) = best else { break };
                h.swap_cols(c, b);
                v.swap_cols(c, b);
                let mut done = true;
                for j in (c + 1)..self.cols {
                    if h.get(r, j).is_zero() {
                        continue;
                    }
                    let q = -h.get(r, j).div_floor(h.get(r, c));
                    h.add_col_multiple(j, c, &q);
                    v.add_col_multiple(j, c, &q);
                    if !h.get(r, j).is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h.get(r, c).is_zero() {
                continue; // row has no pivot
            }
            if h.get(r, c).is_negative() {
                h.negate_col(c);
                v.negate_col(c);
            }
            // Reduce earlier pivot columns against this pivot.
            for j in 0..c {
                let q = -h.get(r, j).div_floor(h.get(r, c));
                h.add_col_multiple(j, c, &q);
                v.add_col_multiple(j, c, &q);
            }
            pivots.push((r, c));
            c += 1;
        }
        (h, v, pivots)
    }

    /// Basis of the integer kernel {x : A·x = 0}, as a matrix whose columns
    /// are the basis vectors, in Hermite-canonical form.
    pub fn kernel(&self) -> IntMatrix {
        let s = self.smith();
        let rank = s.rank();
        let ids: Vec<usize> = (rank..self.cols).collect();
        let cols: Vec<Vec<BigInt>> = ids.iter().map(|&i| s.v.column(i)).collect();
        let k = IntMatrix::from_columns(&cols, self.cols);
        let (h, _, _) = k.hermite_columns();
        // Drop zero columns (there are none for a kernel basis, but keep tidy).
        let nonzero: Vec<Vec<BigInt>> = (0..h.cols())
            .map(|j| h.column(j))
            .filter(|c| c.iter().any(|x| !x.is_zero()))
            .collect();
        IntMatrix::from_columns(&nonzero, self.cols)
    }

    /// One integer solution of A·x = b, if any.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let s = self.smith();
        let rank = s.rank();
        let c = s.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows.min(self.cols) {
            let d = s.d.get(i, i);
            if d.is_zero() {
                if !c[i].is_zero() {
                    return None;
                }
            } else {
                let (q, r) = c[i].div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
        }
        for item in c.iter().take(self.rows).skip(rank) {
            if !item.is_zero() {
                return None;
            }
        }
        Some(s.v.mul_vec(&y))
    }

    /// Solve A·X = B column by column; None if any column is unsolvable.
    pub fn solve_matrix(&self, b: &IntMatrix) -> Option<IntMatrix> {
        assert_eq!(self.rows, b.rows());
        let mut cols = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            cols.push(self.solve(&b.column(j))?);
        }
        Some(IntMatrix::from_columns(&cols, self.cols))
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| i64::try_from(self.get(i, j)).expect("entry exceeds i64 in report"))
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// One pivot round of the Smith reduction at position (t, t): picks the
/// entry of smallest nonzero absolute value (ties by position), moves it to
/// the pivot, and clears its row and column. Returns false when the
/// trailing block is entirely zero.
fn reduce_pivot_block(d: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, t: usize) -> bool {
    loop {
        // Pivot selection: smallest |entry|, then lexicographic (i, j).
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..d.rows() {
            for j in t..d.cols() {
                if d.get(i, j).is_zero() {
                    continue;
                }
                pivot = match pivot {
                    None => Some((i, j)),
                    Some((pi, pj)) => {
                        if d.get(i, j).abs() < d.get(pi, pj).abs() {
                            Some((i, j))
                        } else {
                            Some((pi, pj))
                        }
                    }
                };
            }
        }
        let Some((pi, pj)) = pivot else {
            return false;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in (t + 1)..d.rows() {
            if d.get(i, t).is_zero() {
                continue;
            }
            let q = -d.get(i, t).div_floor(d.get(t, t));
            d.add_row_multiple(i, t, &q);
            u.add_row_multiple(i, t, &q);
            if !d.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in (t + 1)..d.cols() {
            if d.get(t, j).is_zero() {
                continue;
            }
            let q = -d.get(t, j).div_floor(d.get(t, t));
            d.add_col_multiple(j, t, &q);
            v.add_col_multiple(j, t, &q);
            if !d.get(t, j).is_zero() {
                clean = false;
            }
        }
        if clean {
            return true;
        }
    }
}

/// Smith decomposition U·A·V = D.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.get(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

/// Finitely generated abelian group in invariant-factor form.
///
/// `invariant_factors` lists torsion factors (> 1, each dividing the next)
/// followed by one 0 per free ℤ summand. The trivial group has an empty
/// list. Elements are coordinate vectors aligned with the factors, reduced
/// into [0, f) for torsion coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FGAbelianGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl FGAbelianGroup {
    pub fn trivial() -> Self {
        FGAbelianGroup {
            invariant_factors: vec![],
        }
    }

    /// Canonicalize a raw factor list: drop units, sort torsion factors by
    /// divisibility (they already divide in SNF order), trailing zeros.
    pub fn from_raw_factors(factors: Vec<BigInt>) -> Self {
        let mut torsion: Vec<BigInt> = factors
            .iter()
            .filter(|f| !f.is_zero() && !f.is_one())
            .cloned()
            .collect();
        torsion.sort();
        let free = factors.iter().filter(|f| f.is_zero()).count();
        torsion.extend(std::iter::repeat(BigInt::zero()).take(free));
        FGAbelianGroup {
            invariant_factors: torsion,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.invariant_factors
            .iter()
            .filter(|f| f.is_zero())
            .count()
    }

    pub fn torsion_factors(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|f| !f.is_zero())
            .cloned()
            .collect()
    }

    /// Number of elements, None when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(
            self.invariant_factors
                .iter()
                .fold(BigInt::one(), |acc, f| acc * f),
        )
    }

    /// Reduce a coordinate vector into canonical range.
    pub fn reduce(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.invariant_factors.len());
        coords
            .iter()
            .zip(self.invariant_factors.iter())
            .map(|(c, f)| {
                if f.is_zero() {
                    c.clone()
                } else {
                    c.mod_floor(f)
                }
            })
            .collect()
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let sum: Vec<BigInt> = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        self.reduce(&sum)
    }

    pub fn neg(&self, a: &[BigInt]) -> Vec<BigInt> {
        let n: Vec<BigInt> = a.iter().map(|x| -x).collect();
        self.reduce(&n)
    }

    pub fn zero_element(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.invariant_factors.len()]
    }

    pub fn is_zero_element(&self, a: &[BigInt]) -> bool {
        self.reduce(a).iter().all(|x| x.is_zero())
    }

    /// Order of an element; None when infinite.
    pub fn element_order(&self, a: &[BigInt]) -> Option<BigInt> {
        let a = self.reduce(a);
        let mut ord = BigInt::one();
        for (c, f) in a.iter().zip(self.invariant_factors.iter()) {
            if f.is_zero() {
                if !c.is_zero() {
                    return None;
                }
                continue;
            }
            if c.is_zero() {
                continue;
            }
            let g = c.gcd(f);
            let o = f / g;
            ord = ord.lcm(&o);
        }
        Some(ord)
    }

    /// All elements in lexicographic coordinate order. Panics when infinite.
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        assert_eq!(self.free_rank(), 0, "cannot enumerate an infinite group");
        let mut out: Vec<Vec<BigInt>> = vec![vec![]];
        for f in &self.invariant_factors {
            let mut next = Vec::new();
            for prefix in &out {
                let mut c = BigInt::zero();
                while &c < f {
                    let mut e = prefix.clone();
                    e.push(c.clone());
                    next.push(e);
                    c += 1;
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for FGAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for x in &self.invariant_factors {
            if x.is_zero() {
                parts.push("Z".to_string());
            } else {
                parts.push(format!("Z/{}", x));
            }
        }
        write!(f, "{}", parts.join(" x "))
    }
}

/// Cokernel ℤ^rows / column-span(A) together with the projection map.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FGAbelianGroup,
    ambient: usize,
    u: IntMatrix,
    u_inv: IntMatrix,
    /// per-row factor after SNF: d_i for diagonal rows, 0 for rows past the rank
    row_factors: Vec<BigInt>,
    /// rows contributing canonical coordinates (factor != 1)
    kept: Vec<usize>,
}

impl Cokernel {
    /// Project an ambient vector to its class, in canonical coordinates.
    pub fn project(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.ambient);
        let y = self.u.mul_vec(v);
        let coords: Vec<BigInt> = self.kept.iter().map(|&i| y[i].clone()).collect();
        self.group.reduce(&coords)
    }

    /// One ambient representative of a class given in canonical coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.kept.len());
        let mut y = vec![BigInt::zero(); self.ambient];
        for (slot, c) in self.kept.iter().zip(coords.iter()) {
            y[*slot] = c.clone();
        }
        self.u_inv.mul_vec(&y)
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Factor attached to each canonical coordinate (0 = free).
    pub fn coordinate_factors(&self) -> Vec<BigInt> {
        self.kept
            .iter()
            .map(|&i| self.row_factors[i].clone())
            .collect()
    }
}

/// Cokernel of A as a map ℤ^cols → ℤ^rows (quotient by the column span).
pub fn cokernel(a: &IntMatrix) -> Cokernel {
    let s = a.smith();
    let n = a.rows();
    let mut row_factors = vec![BigInt::zero(); n];
    for i in 0..a.rows().min(a.cols()) {
        row_factors[i] = s.d.get(i, i).clone();
    }
    let kept: Vec<usize> = (0..n).filter(|&i| !row_factors[i].is_one()).collect();
    let factors: Vec<BigInt> = kept.iter().map(|&i| row_factors[i].clone()).collect();
    let group = FGAbelianGroup::from_raw_factors(factors.clone());
    // from_raw_factors sorts torsion ascending; SNF already emits factors in
    // divisibility order and zeros last, so kept order matches canonical order.
    debug_assert_eq!(
        group.invariant_factors,
        factors
            .iter()
            .filter(|f| !f.is_one())
            .cloned()
            .collect::<Vec<_>>()
    );
    let u_inv = s.u.inverse_unimodular();
    Cokernel {
        group,
        ambient: n,
        u: s.u,
        u_inv,
        row_factors,
        kept,
    }
}

/// A subquotient L1/L2 of an ambient lattice ℤ^n, where L1 is given by a
/// basis matrix (columns) and L2 by generating vectors contained in L1.
/// Carries the projection from ambient vectors (lying in L1) to classes.
#[derive(Clone, Debug)]
pub struct Subquotient {
    basis: IntMatrix,
    coker: Cokernel,
}

impl Subquotient {
    /// `basis`: n×k matrix of independent columns spanning L1.
    /// `relations`: generators of L2, as columns of an n×m matrix.
    pub fn new(basis: IntMatrix, relations: &IntMatrix) -> Self {
        assert_eq!(basis.rows(), relations.rows());
        let coords = basis
            .solve_matrix(relations)
            .expect("relations do not lie in the sublattice");
        let coker = cokernel(&coords);
        Subquotient { basis, coker }
    }

    pub fn group(&self) -> &FGAbelianGroup {
        &self.coker.group
    }

    /// Class of an ambient vector (must lie in L1).
    pub fn class_of(&self, v: &[BigInt]) -> Vec<BigInt> {
        let coords = self
            .basis
            .solve(v)
            .expect("vector does not lie in the sublattice");
        self.coker.project(&coords)
    }

    /// An ambient representative of a class.
    pub fn lift(&self, class: &[BigInt]) -> Vec<BigInt> {
        let coords = self.coker.lift(class);
        self.basis.mul_vec(&coords)
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }
}

/// Outcome of a linear Diophantine solve: one particular solution (when the
/// system is consistent over ℤ) plus a basis of the integer kernel.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Option<Vec<BigInt>>,
    pub kernel: IntMatrix,
}

pub fn solve_linear(a: &IntMatrix, b: &[BigInt]) -> LinearSolution {
    LinearSolution {
        particular: a.solve(b),
        kernel: a.kernel(),
    }
}

/// Find an integer matrix s with pi·s = id and s·ρ_M(g) = ρ_P(g)·s for all
/// paired generators, i.e. an equivariant section of the surjection
/// pi : P → M. All constraints are flattened into one joint Diophantine
/// system over the entries of s.
///
/// `p_gens` and `m_gens` are paired action matrices of the same group
/// generators on P (rank p) and M (rank m); `pi` is m×p.
pub fn solve_equivariant_section(
    p_gens: &[IntMatrix],
    m_gens: &[IntMatrix],
    pi: &IntMatrix,
) -> Result<Option<IntMatrix>> {
    let m_rank = pi.rows();
    let p_rank = pi.cols();
    assert_eq!(p_gens.len(), m_gens.len(), "generator lists must pair up");
    for g in p_gens {
        assert_eq!((g.rows(), g.cols()), (p_rank, p_rank));
    }
    for g in m_gens {
        assert_eq!((g.rows(), g.cols()), (m_rank, m_rank));
    }
    // pi must be surjective: all SNF invariant factors are 1.
    let s = pi.smith();
    if s.rank() != m_rank || !s.diagonal().iter().all(|d| d.is_one()) {
        return Err(Error::precondition("not a surjection"));
    }
    // pi must intertwine the actions.
    for (pg, mg) in p_gens.iter().zip(m_gens.iter()) {
        if pi.mul(pg) != mg.mul(pi) {
            return Err(Error::precondition(
                "projection does not commute with the group actions",
            ));
        }
    }

    // Unknowns: entries of s (p_rank × m_rank), row-major.
    let nvar = p_rank * m_rank;
    let idx = |i: usize, j: usize| i * m_rank + j;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    let mut rhs: Vec<BigInt> = Vec::new();

    // pi·s = identity.
    for a in 0..m_rank {
        for j in 0..m_rank {
            let mut row = vec![BigInt::zero(); nvar];
            for i in 0..p_rank {
                row[idx(i, j)] = pi.get(a, i).clone();
            }
            rows.push(row);
            rhs.push(if a == j {
                BigInt::one()
            } else {
                BigInt::zero()
            });
        }
    }
    // ρ_P(g)·s − s·ρ_M(g) = 0 per generator.
    for (pg, mg) in p_gens.iter().zip(m_gens.iter()) {
        for i in 0..p_rank {
            for j in 0..m_rank {
                let mut row = vec![BigInt::zero(); nvar];
                for t in 0..p_rank {
                    row[idx(t, j)] += pg.get(i, t);
                }
                for t in 0..m_rank {
                    row[idx(i, t)] -= mg.get(t, j);
                }
                rows.push(row);
                rhs.push(BigInt::zero());
            }
        }
    }

    let a = IntMatrix::from_bigint_rows(rows);
    let sol = match a.solve(&rhs) {
        None => return Ok(None),
        Some(x) => x,
    };
    let mut sec = IntMatrix::zero(p_rank, m_rank);
    for i in 0..p_rank {
        for j in 0..m_rank {
            sec.set(i, j, sol[idx(i, j)].clone());
        }
    }
    // Re-verify both constraint families before handing the section out.
    assert!(pi.mul(&sec).is_identity(), "section verification failed");
    for (pg, mg) in p_gens.iter().zip(m_gens.iter()) {
        assert_eq!(
            pg.mul(&sec),
            sec.mul(mg),
            "equivariance verification failed"
        );
    }
    Ok(Some(sec))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bigvec(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        let a = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = a.smith();
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert_eq!(s.diagonal(), bigvec(&[2, 4]));
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
    }

    #[test]
    fn smith_of_identity_and_zero() {
        let i3 = IntMatrix::identity(3);
        assert_eq!(i3.smith().diagonal(), bigvec(&[1, 1, 1]));
        let z = IntMatrix::zero(2, 2);
        let s = z.smith();
        assert_eq!(s.rank(), 0);
        assert!(s.d.is_zero());
    }

    #[test]
    fn smith_divisibility_chain() {
        let a = IntMatrix::from_rows(&[vec![4, 0], vec![0, 6]]);
        let s = a.smith();
        assert_eq!(s.diagonal(), bigvec(&[2, 12]));
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
    }

    #[test]
    fn cokernel_cases() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(cokernel(&a).group.to_string(), "Z/2");

        let col = IntMatrix::from_rows(&[vec![1], vec![1]]);
        let ck = cokernel(&col);
        assert_eq!(ck.group.to_string(), "Z");
        // the class of e1 generates; e1 and -e2 agree up to the relation (1,1)
        let c1 = ck.project(&bigvec(&[1, 0]));
        let c2 = ck.project(&bigvec(&[0, -1]));
        assert_eq!(c1, c2);
    }

    #[test]
    fn cokernel_projection_lift_roundtrip() {
        let a = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3], vec![0, 0]]);
        let ck = cokernel(&a);
        assert_eq!(ck.group.to_string(), "Z/6 x Z");
        for v in [bigvec(&[1, 2, -5]), bigvec(&[0, 0, 7]), bigvec(&[3, 4, 1])] {
            let c = ck.project(&v);
            let lifted = ck.lift(&c);
            assert_eq!(ck.project(&lifted), c);
        }
    }

    #[test]
    fn solve_linear_examples() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        let sol = solve_linear(&a, &bigvec(&[4]));
        assert_eq!(sol.particular, Some(bigvec(&[2])));
        assert_eq!(sol.kernel.cols(), 0);

        let unsolvable = solve_linear(&a, &bigvec(&[3]));
        assert!(unsolvable.particular.is_none());

        let sum = IntMatrix::from_rows(&[vec![1, 1]]);
        let sol = solve_linear(&sum, &bigvec(&[1]));
        let x = sol.particular.unwrap();
        assert_eq!(&x[0] + &x[1], BigInt::one());
        assert_eq!(sol.kernel.cols(), 1);
        let k = sol.kernel.column(0);
        assert_eq!(&k[0] + &k[1], BigInt::zero());
    }

    #[test]
    fn kernel_maps_to_zero() {
        let a = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        for j in 0..k.cols() {
            assert!(a.mul_vec(&k.column(j)).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn hermite_columns_canonical() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let (h, v, pivots) = a.hermite_columns();
        assert_eq!(a.mul(&v), h);
        assert!(v.is_unimodular());
        for &(r, c) in &pivots {
            assert!(h.get(r, c).is_positive());
            for j in (c + 1)..h.cols() {
                assert!(h.get(r, j).is_zero());
            }
        }
    }

    #[test]
    fn equivariant_section_identity() {
        let id = IntMatrix::identity(2);
        let s = solve_equivariant_section(&[id.clone()], &[id.clone()], &id)
            .unwrap()
            .unwrap();
        assert!(s.is_identity());
    }

    #[test]
    fn equivariant_section_augmentation_fails() {
        // P = Z[C2] with swap, M = Z trivial, pi = (1,1): a section must be
        // (a,a) with 2a = 1, impossible over Z.
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let triv = IntMatrix::identity(1);
        let pi = IntMatrix::from_rows(&[vec![1, 1]]);
        let s = solve_equivariant_section(&[swap], &[triv], &pi).unwrap();
        assert!(s.is_none());
    }

    #[test]
    fn equivariant_section_exists_for_split_surjection() {
        // P = Z^3 with swap of the first two coordinates, M = Z^2 with swap,
        // pi maps e1 -> (1,0), e2 -> (0,1), e3 -> (1,1).
        let p_swap = IntMatrix::from_rows(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]);
        let m_swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let pi = IntMatrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let s = solve_equivariant_section(&[p_swap], &[m_swap], &pi).unwrap();
        assert!(s.is_some());
    }

    #[test]
    fn equivariant_section_rejects_non_surjection() {
        let two = IntMatrix::from_rows(&[vec![2]]);
        let id = IntMatrix::identity(1);
        let r = solve_equivariant_section(&[id.clone()], &[id], &two);
        assert!(r.is_err());
    }

    #[test]
    fn fg_group_canonical_form_and_orders() {
        let g = FGAbelianGroup::from_raw_factors(bigvec(&[1, 2, 0, 6]));
        assert_eq!(g.to_string(), "Z/2 x Z/6 x Z");
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.order(), None);

        let f = FGAbelianGroup::from_raw_factors(bigvec(&[2, 4]));
        assert_eq!(f.order(), Some(BigInt::from(8)));
        assert_eq!(f.element_order(&bigvec(&[1, 0])), Some(BigInt::from(2)));
        assert_eq!(f.element_order(&bigvec(&[0, 1])), Some(BigInt::from(4)));
        assert_eq!(f.element_order(&bigvec(&[1, 2])), Some(BigInt::from(2)));
        assert_eq!(f.elements().len(), 8);
    }

    #[test]
    fn subquotient_classes() {
        // L1 = 2Z x Z inside Z^2, L2 spanned by (2,0) and (0,3):
        // quotient is Z/3 (the (2,0) generator kills the first coordinate).
        let basis = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        let rel = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let sq = Subquotient::new(basis, &rel);
        assert_eq!(sq.group().to_string(), "Z/3");
        let c = sq.class_of(&bigvec(&[0, 1]));
        assert!(!sq.group().is_zero_element(&c));
        let z = sq.class_of(&bigvec(&[2, 3]));
        assert!(sq.group().is_zero_element(&z));
    }
}
