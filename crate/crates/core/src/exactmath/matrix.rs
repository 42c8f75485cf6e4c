//! Integer matrices, Smith normal form with transformation matrices, and
//! finitely generated abelian groups given by relation matrices.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};

use super::big;

/// Dense row-major matrix over Z.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&v| big(v)));
        }
        IntMatrix { rows: r, cols: c, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
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

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn row_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot += vi * self.get(i, j);
            }
        }
        out
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

    /// row_i += c * row_k
    fn add_row(&mut self, i: usize, k: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(i, j) + c * self.get(k, j);
            self.set(i, j, v);
        }
    }

    /// col_j += c * col_k
    fn add_col(&mut self, j: usize, k: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, j) + c * self.get(i, k);
            self.set(i, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j).clone();
            self.set(i, j, v);
        }
    }

    /// Determinant by Bareiss fraction-free elimination (square matrices).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                let pivot = (k + 1..n).find(|&i| !a.get(i, k).is_zero());
                match pivot {
                    Some(i) => {
                        a.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
                a.set(i, k, BigInt::zero());
            }
            prev = a.get(k, k).clone();
        }
        sign * a.get(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of `smith_normal_form`: `u * m * v = s` with `u`, `v` unimodular
/// and `s` diagonal with nonnegative entries `s_1 | s_2 | ...`.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        let n = self.s.rows().min(self.s.cols());
        (0..n).take_while(|&i| !self.s.get(i, i).is_zero()).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Smith normal form over Z. Pivoting is deterministic: among nonzero entries
/// of the trailing submatrix, the one of smallest absolute value, scanning
/// rows then columns, wins.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut k = 0;

    'outer: while k < rows.min(cols) {
        // smallest-absolute-value nonzero pivot in a[k.., k..]
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if a.get(i, j).is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => a.get(i, j).abs() < a.get(pi, pj).abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break; // trailing submatrix is zero
        };
        a.swap_rows(k, pi);
        u.swap_rows(k, pi);
        a.swap_cols(k, pj);
        v.swap_cols(k, pj);

        // clear column k; truncated quotients leave remainders < |pivot|
        let mut clean = true;
        for i in k + 1..rows {
            if a.get(i, k).is_zero() {
                continue;
            }
            let q = a.get(i, k) / a.get(k, k);
            let nq = -q;
            a.add_row(i, k, &nq);
            u.add_row(i, k, &nq);
            if !a.get(i, k).is_zero() {
                clean = false;
            }
        }
        // clear row k
        for j in k + 1..cols {
            if a.get(k, j).is_zero() {
                continue;
            }
            let q = a.get(k, j) / a.get(k, k);
            let nq = -q;
            a.add_col(j, k, &nq);
            v.add_col(j, k, &nq);
            if !a.get(k, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // a strictly smaller pivot now exists; redo step k
        }
        // pivot must divide the whole trailing submatrix
        for i in k + 1..rows {
            for j in k + 1..cols {
                if !a.get(i, j).mod_floor(a.get(k, k)).is_zero() {
                    a.add_row(k, i, &BigInt::one());
                    u.add_row(k, i, &BigInt::one());
                    continue 'outer;
                }
            }
        }
        k += 1;
    }

    // normalize signs on the diagonal
    for i in 0..rows.min(cols) {
        if a.get(i, i).is_negative() {
            a.negate_row(i);
            u.negate_row(i);
        }
    }

    SnfResult { s: a, u, v }
}

/// A finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_k`
/// presented on labelled generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupPresentation {
    pub generators: Vec<String>,
    pub free_rank: usize,
    /// Invariant factors > 1, each dividing the next.
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupPresentation {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Quotient `Z^gens / row lattice of rels`. `rels` has one column per
/// generator; an empty relation matrix yields the free group.
pub fn abelian_group_from_relations(
    generators: &[String],
    rels: &IntMatrix,
) -> AbelianGroupPresentation {
    let n = generators.len();
    if rels.rows() == 0 {
        return AbelianGroupPresentation {
            generators: generators.to_vec(),
            free_rank: n,
            torsion: Vec::new(),
        };
    }
    assert_eq!(rels.cols(), n, "one relation column per generator");
    let snf = smith_normal_form(rels);
    let rank = snf.rank();
    let torsion = snf
        .diagonal()
        .into_iter()
        .take(rank)
        .filter(|d| d > &BigInt::one())
        .collect();
    AbelianGroupPresentation {
        generators: generators.to_vec(),
        free_rank: n - rank,
        torsion,
    }
}

/// Membership data of a vector relative to the row lattice of a relation
/// matrix: whether it lies in the lattice, and its class coordinates in the
/// quotient (one entry per Smith invariant, residues mod `s_i`, then the free
/// coordinates verbatim).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMembership {
    pub in_lattice: bool,
    pub class_coordinates: Vec<BigInt>,
}

/// Decide whether `vec` lies in the lattice spanned by the rows of `rels`,
/// using the Smith form: with `u*rels*v = s`, the vector lies in the row
/// lattice iff `w = vec*v` is componentwise divisible by the diagonal of `s`
/// (zero diagonal forcing zero).
pub fn row_lattice_membership(rels: &IntMatrix, vec: &[BigInt]) -> LatticeMembership {
    let n = vec.len();
    if rels.rows() == 0 {
        return LatticeMembership {
            in_lattice: vec.iter().all(|x| x.is_zero()),
            class_coordinates: vec.to_vec(),
        };
    }
    assert_eq!(rels.cols(), n);
    let snf = smith_normal_form(rels);
    let w = snf.v.row_mul(vec);
    let rank = snf.rank();
    let mut in_lattice = true;
    let mut coords = Vec::with_capacity(n);
    for (i, wi) in w.iter().enumerate() {
        if i < rank {
            let s = snf.s.get(i, i);
            let r = wi.mod_floor(s);
            if !r.is_zero() {
                in_lattice = false;
            }
            coords.push(r);
        } else {
            if !wi.is_zero() {
                in_lattice = false;
            }
            coords.push(wi.clone());
        }
    }
    LatticeMembership {
        in_lattice,
        class_coordinates: coords,
    }
}
