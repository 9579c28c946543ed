//! Hermite and Smith normal forms over the integers.
//!
//! Pivoting is deterministic everywhere: the entry of minimal absolute value is
//! chosen, ties broken by lowest row index and then lowest column index.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

type Rows = Vec<Vec<BigInt>>;

fn identity_rows(n: usize) -> Rows {
    IntegerMatrix::identity(n).into_rows()
}

/// `rows[dst] -= q * rows[src]`, touching only the nonzero entries of the source row.
fn row_axpy(rows: &mut Rows, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() || dst == src {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = rows.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = rows.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// `col[dst] -= q * col[src]` on row-major storage.
fn col_axpy(rows: &mut Rows, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() || dst == src {
        return;
    }
    for r in rows.iter_mut() {
        if !r[src].is_zero() {
            let t = q * &r[src];
            r[dst] -= t;
        }
    }
}

fn col_swap(rows: &mut Rows, a: usize, b: usize) {
    if a != b {
        for r in rows.iter_mut() {
            r.swap(a, b);
        }
    }
}

fn col_negate(rows: &mut Rows, c: usize) {
    for r in rows.iter_mut() {
        r[c] = -std::mem::take(&mut r[c]);
    }
}

fn row_negate(rows: &mut Rows, r: usize) {
    for v in rows[r].iter_mut() {
        *v = -std::mem::take(v);
    }
}

/// Result of [`row_hermite`]: `transform * input = form`.
#[derive(Debug, Clone)]
pub struct RowHermite {
    pub form: IntegerMatrix,
    /// Unimodular left transform, present when requested.
    pub transform: Option<IntegerMatrix>,
    /// `(row, column)` of every pivot, in increasing order.
    pub pivots: Vec<(usize, usize)>,
}

impl RowHermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduced row Hermite normal form: row echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`.
pub fn row_hermite(m: &IntegerMatrix, track: bool) -> RowHermite {
    let nrows = m.nrows();
    let ncols = m.ncols();
    let mut a = m.clone().into_rows();
    let mut u = track.then(|| identity_rows(nrows));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let mut found = false;
        loop {
            let pick = (r..nrows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()).then(i.cmp(&j)));
            let Some(p) = pick else { break };
            found = true;
            a.swap(r, p);
            if let Some(u) = u.as_mut() {
                u.swap(r, p);
            }
            let mut clean = true;
            for i in r + 1..nrows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                row_axpy(&mut a, i, r, &q);
                if let Some(u) = u.as_mut() {
                    row_axpy(u, i, r, &q);
                }
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if a[r][c].is_negative() {
            row_negate(&mut a, r);
            if let Some(u) = u.as_mut() {
                row_negate(u, r);
            }
        }
        for i in 0..r {
            if a[i][c].is_zero() {
                continue;
            }
            let q = a[i][c].div_floor(&a[r][c]);
            row_axpy(&mut a, i, r, &q);
            if let Some(u) = u.as_mut() {
                row_axpy(u, i, r, &q);
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    RowHermite {
        form: IntegerMatrix::from_big_rows(a, ncols),
        transform: u.map(|u| IntegerMatrix::from_big_rows(u, nrows)),
        pivots,
    }
}

pub fn rank(m: &IntegerMatrix) -> usize {
    row_hermite(m, false).rank()
}

/// Columns form a Z-basis of the integer kernel `{x : m x = 0}`.
pub fn kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let n = m.ncols();
    let h = row_hermite(&m.transpose(), true);
    let u = h.transform.expect("transform requested");
    let rank = h.pivots.len();
    let rows: Vec<usize> = (rank..n).collect();
    u.select_rows(&rows).transpose()
}

/// Smith normal form `U * M * V = S`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub left: IntegerMatrix,
    pub left_inverse: IntegerMatrix,
    pub diagonal: IntegerMatrix,
    pub right: IntegerMatrix,
    pub right_inverse: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        diagonal_entries(&self.diagonal)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn diagonal_entries(s: &IntegerMatrix) -> Vec<BigInt> {
    (0..s.nrows().min(s.ncols())).map(|i| s.get(i, i).clone()).take_while(|d| !d.is_zero()).collect()
}

struct SmithWork {
    a: Rows,
    u: Option<(Rows, Rows)>,
    v: Option<(Rows, Rows)>,
}

impl SmithWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some((u, ui)) = self.u.as_mut() {
            u.swap(i, j);
            col_swap(ui, i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        col_swap(&mut self.a, i, j);
        if let Some((v, vi)) = self.v.as_mut() {
            col_swap(v, i, j);
            vi.swap(i, j);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        row_axpy(&mut self.a, dst, src, q);
        if let Some((u, ui)) = self.u.as_mut() {
            row_axpy(u, dst, src, q);
            // inverse: col[src] += q * col[dst]
            col_axpy(ui, src, dst, &-q);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_op(&mut self, dst: usize, src: usize, q: &BigInt) {
        col_axpy(&mut self.a, dst, src, q);
        if let Some((v, vi)) = self.v.as_mut() {
            col_axpy(v, dst, src, q);
            // inverse: row[src] += q * row[dst]
            row_axpy(vi, src, dst, &-q);
        }
    }

    fn negate_row(&mut self, r: usize) {
        row_negate(&mut self.a, r);
        if let Some((u, ui)) = self.u.as_mut() {
            row_negate(u, r);
            col_negate(ui, r);
        }
    }
}

fn smith_in_place(w: &mut SmithWork, nrows: usize, ncols: usize) {
    let mut t = 0;
    while t < nrows.min(ncols) {
        // global minimal pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                let v = &w.a[i][j];
                if v.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if w.a[bi][bj].abs() <= v.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..nrows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.row_op(i, t, &q);
                if !w.a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..ncols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.col_op(j, t, &q);
                if !w.a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // bring the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..nrows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..ncols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !w.a[i][j].is_multiple_of(&w.a[t][t])));
            match bad {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    w.row_op(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (nrows, ncols) = (m.nrows(), m.ncols());
    let mut w = SmithWork {
        a: m.clone().into_rows(),
        u: Some((identity_rows(nrows), identity_rows(nrows))),
        v: Some((identity_rows(ncols), identity_rows(ncols))),
    };
    smith_in_place(&mut w, nrows, ncols);
    let (u, ui) = w.u.unwrap();
    let (v, vi) = w.v.unwrap();
    SmithForm {
        left: IntegerMatrix::from_big_rows(u, nrows),
        left_inverse: IntegerMatrix::from_big_rows(ui, nrows),
        diagonal: IntegerMatrix::from_big_rows(w.a, ncols),
        right: IntegerMatrix::from_big_rows(v, ncols),
        right_inverse: IntegerMatrix::from_big_rows(vi, ncols),
    }
}

/// Nonzero invariant factors `d_1 | d_2 | ...` without computing transforms.
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    // Shrink to the row Hermite form first; it has the same factors and is
    // usually far smaller than the input.
    let h = row_hermite(m, false);
    let keep: Vec<usize> = (0..h.rank()).collect();
    let reduced = h.form.select_rows(&keep);
    let (nrows, ncols) = (reduced.nrows(), reduced.ncols());
    let mut w = SmithWork { a: reduced.into_rows(), u: None, v: None };
    smith_in_place(&mut w, nrows, ncols);
    diagonal_entries(&IntegerMatrix::from_big_rows(w.a, ncols))
}

/// An integral solution of `m x = target`, if one exists.
pub fn preimage_solve(m: &IntegerMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.nrows(), target.len(), "target length must match row count");
    let snf = smith_normal_form(m);
    let ut = snf.left.mul_vec(target);
    let factors = snf.invariant_factors();
    let mut y = vec![BigInt::zero(); m.ncols()];
    for (i, v) in ut.iter().enumerate() {
        if i < factors.len() {
            let (q, r) = v.div_rem(&factors[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !v.is_zero() {
            return None;
        }
    }
    Some(snf.right.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_of_two_by_two() {
        let m = IntegerMatrix::from_rows(&[[2, 4], [6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.invariant_factors(), big(&[2, 4]));
        assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal);
        assert!(s.left.mul(&s.left_inverse).is_identity());
        assert!(s.right.mul(&s.right_inverse).is_identity());
        assert_eq!(invariant_factors(&m), big(&[2, 4]));
    }

    #[test]
    fn smith_identity_and_zero() {
        let id = IntegerMatrix::identity(3);
        assert_eq!(smith_normal_form(&id).diagonal, id);
        assert_eq!(invariant_factors(&id), big(&[1, 1, 1]));
        let z = IntegerMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert!(s.diagonal.is_zero());
        assert!(s.invariant_factors().is_empty());
    }

    #[test]
    fn hermite_is_reduced_echelon() {
        let m = IntegerMatrix::from_rows(&[[4, 6, 2], [2, 3, 5], [6, 9, 7]]);
        let h = row_hermite(&m, true);
        let u = h.transform.clone().unwrap();
        assert_eq!(u.mul(&m), h.form);
        assert_eq!(u.determinant().abs(), BigInt::one());
        assert_eq!(h.rank(), 2);
        for &(r, c) in &h.pivots {
            let p = h.form.get(r, c);
            assert!(p.is_positive());
            for i in 0..r {
                let e = h.form.get(i, c);
                assert!(!e.is_negative() && e < p);
            }
        }
    }

    #[test]
    fn kernel_of_boundary() {
        // boundary of a triangle loop: kernel is spanned by the cycle
        let d1 = IntegerMatrix::from_rows(&[[-1, -1, 0], [1, 0, -1], [0, 1, 1]]);
        let k = kernel_basis(&d1);
        assert_eq!(k.ncols(), 1);
        assert!(d1.mul(&k).is_zero());
    }

    #[test]
    fn preimage_examples() {
        let m = IntegerMatrix::from_rows(&[[2]]);
        assert_eq!(preimage_solve(&m, &big(&[4])), Some(big(&[2])));
        assert_eq!(preimage_solve(&m, &big(&[3])), None);
        let id = IntegerMatrix::identity(3);
        assert_eq!(preimage_solve(&id, &big(&[5, -1, 7])), Some(big(&[5, -1, 7])));
    }
}
