//! Small exact linear algebra over Z and Q: rational inverses and the
//! column-style Hermite normal form used to pick coset representatives.

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type RatMatrix = Vec<Vec<Rational64>>;
pub type IntMatrix = Vec<Vec<i64>>;

pub fn to_rational(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect()
}

/// Gauss-Jordan inverse. Returns `None` for singular input.
pub fn rat_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.clone();
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational64::one() } else { Rational64::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (x, y) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * x;
                    inv[r][j] -= f * y;
                }
            }
        }
    }
    Some(inv)
}

pub fn rat_mat_vec(m: &RatMatrix, v: &[i64]) -> Vec<Rational64> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rational64::zero(), |acc, (a, &b)| acc + a * b)
        })
        .collect()
}

pub fn int_mat_vec(m: &IntMatrix, v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn determinant(m: &IntMatrix) -> i64 {
    let n = m.len();
    let mut a = to_rational(m);
    let mut det = Rational64::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return 0;
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..n {
            let f = a[r][col] / p;
            for j in col..n {
                let x = a[col][j];
                a[r][j] -= f * x;
            }
        }
    }
    debug_assert!(det.is_integer());
    det.to_integer()
}

/// Lower-triangular basis of the lattice spanned by the columns of a
/// nonsingular integer matrix: `h[i][j] == 0` for `j > i` and `h[i][i] > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermiteBasis {
    h: IntMatrix,
}

impl HermiteBasis {
    pub fn from_columns(m: &IntMatrix) -> Self {
        let n = m.len();
        let mut h = m.clone();
        for i in 0..n {
            // Euclid across columns i..n on row i.
            loop {
                let nonzero: Vec<usize> = (i..n).filter(|&j| h[i][j] != 0).collect();
                if nonzero.len() <= 1 {
                    if let Some(&j) = nonzero.first() {
                        swap_cols(&mut h, i, j);
                    }
                    break;
                }
                let &jmin = nonzero.iter().min_by_key(|&&j| h[i][j].abs()).unwrap();
                for &j in &nonzero {
                    if j != jmin {
                        let q = h[i][j].div_euclid(h[i][jmin]);
                        for row in h.iter_mut() {
                            row[j] -= q * row[jmin];
                        }
                    }
                }
            }
            assert!(h[i][i] != 0, "singular lattice basis");
            if h[i][i] < 0 {
                for row in h.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
        HermiteBasis { h }
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.h.len()).map(|i| self.h[i][i]).collect()
    }

    /// Number of cosets of the lattice in Z^n.
    pub fn index(&self) -> i64 {
        self.diagonal().iter().product()
    }

    /// Unique representative of `v + L` with `0 <= r[i] < h[i][i]`.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut r = v.to_vec();
        for i in 0..self.h.len() {
            let q = r[i].div_euclid(self.h[i][i]);
            if q != 0 {
                for (k, x) in r.iter_mut().enumerate().skip(i) {
                    *x -= q * self.h[k][i];
                }
            }
        }
        r
    }

    /// All canonical representatives, lexicographically ordered.
    pub fn transversal(&self) -> Vec<Vec<i64>> {
        let diag = self.diagonal();
        let mut out = vec![vec![]];
        for &d in &diag {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Integer box `lo..=hi` per coordinate, in lexicographic order.
pub fn integer_box(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for (&a, &b) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (a..=b).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// Bounds on `x = m * y` for `y` ranging over the box `lo..=hi`, rounded
/// outward to integers.
pub fn image_bounds(m: &RatMatrix, lo: &[i64], hi: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let mut out_lo = Vec::with_capacity(m.len());
    let mut out_hi = Vec::with_capacity(m.len());
    for row in m {
        let mut a = Rational64::zero();
        let mut b = Rational64::zero();
        for (c, (&l, &h)) in row.iter().zip(lo.iter().zip(hi)) {
            let (x, y) = (c * l, c * h);
            a += x.min(y);
            b += x.max(y);
        }
        out_lo.push(a.floor().to_integer());
        out_hi.push(b.ceil().to_integer());
    }
    (out_lo, out_hi)
}
