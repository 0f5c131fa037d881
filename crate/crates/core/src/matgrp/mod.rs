//! Dense matrices over GF(q), classical forms, and generator sets for the
//! classical groups the catalog needs.
//!
//! Vectors are rows and matrices act on the right, matching the right action
//! of permutations on points. Generator matrices are an implementation choice
//! certified only through the order and form-preservation invariants.

mod generators;

pub use generators::{classical_generators, expected_order, MatGroup};

use crate::gf::{Field, GfError};
use num_bigint::BigUint;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatError {
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("unsupported group spec {0}")]
    UnsupportedSpec(String),
    #[error("cannot parse group spec {0}")]
    ParseSpec(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("generator search failed for {0}")]
    GeneratorSearch(String),
}

/// Square matrix over a finite field, entries stored as element codes.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Arc<Field>,
    n: usize,
    entries: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}{:?}", self.n, self.n, self.rows())
    }
}

impl Matrix {
    pub fn identity(field: &Arc<Field>, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn zero(field: &Arc<Field>, n: usize) -> Matrix {
        Matrix {
            field: Arc::clone(field),
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<u32>]) -> Matrix {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            for &c in r {
                assert!(c < field.q());
                entries.push(c);
            }
        }
        Matrix {
            field: Arc::clone(field),
            n,
            entries,
        }
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect()
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatError> {
        if self.n != other.n || *self.field != *other.field {
            return Err(MatError::DimensionMismatch);
        }
        let n = self.n;
        let f = &self.field;
        let mut out = Matrix::zero(&self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.at(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, b)));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(&self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.at(i, j));
            }
        }
        out
    }

    /// Entrywise Frobenius iterate followed by transposition.
    pub fn conj_transpose(&self, twist: u32) -> Matrix {
        let mut out = Matrix::zero(&self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.field.frobenius(self.at(i, j), twist));
            }
        }
        out
    }

    pub fn frobenius_entrywise(&self, j: u32) -> Matrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = self.field.frobenius(*e, j);
        }
        out
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = self.field.mul(*e, c);
        }
        out
    }

    pub fn det(&self) -> u32 {
        let f = &self.field;
        let n = self.n;
        let mut m = self.entries.clone();
        let mut det = 1u32;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != 0);
            let Some(p) = pivot else { return 0 };
            if p != col {
                for j in 0..n {
                    m.swap(p * n + j, col * n + j);
                }
                det = f.neg(det);
            }
            let pv = m[col * n + col];
            det = f.mul(det, pv);
            let pv_inv = f.inv(pv).unwrap();
            for r in col + 1..n {
                let factor = f.mul(m[r * n + col], pv_inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], sub);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Matrix, MatError> {
        let f = &self.field;
        let n = self.n;
        let mut m = self.entries.clone();
        let mut inv = Matrix::identity(&self.field, n).entries;
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * n + col] != 0);
            let Some(p) = pivot else {
                return Err(MatError::Singular);
            };
            if p != col {
                for j in 0..n {
                    m.swap(p * n + j, col * n + j);
                    inv.swap(p * n + j, col * n + j);
                }
            }
            let pv_inv = f.inv(m[col * n + col]).unwrap();
            for j in 0..n {
                m[col * n + j] = f.mul(m[col * n + j], pv_inv);
                inv[col * n + j] = f.mul(inv[col * n + j], pv_inv);
            }
            for r in 0..n {
                if r == col || m[r * n + col] == 0 {
                    continue;
                }
                let factor = m[r * n + col];
                for j in 0..n {
                    let s1 = f.mul(factor, m[col * n + j]);
                    m[r * n + j] = f.sub(m[r * n + j], s1);
                    let s2 = f.mul(factor, inv[col * n + j]);
                    inv[r * n + j] = f.sub(inv[r * n + j], s2);
                }
            }
        }
        Ok(Matrix {
            field: Arc::clone(&self.field),
            n,
            entries: inv,
        })
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let n = self.n;
        let mut out = vec![0u32; n];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for j in 0..n {
                let e = self.at(i, j);
                if e != 0 {
                    out[j] = f.add(out[j], f.mul(vi, e));
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(&self.field, self.n)
    }

    pub fn is_scalar(&self) -> bool {
        let c = self.at(0, 0);
        if c == 0 {
            return false;
        }
        for i in 0..self.n {
            for j in 0..self.n {
                let want = if i == j { c } else { 0 };
                if self.at(i, j) != want {
                    return false;
                }
            }
        }
        true
    }

    /// Row-major list of element codes.
    pub fn serialize_codes(&self) -> Vec<u32> {
        self.entries.clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixOpKind {
    Mul,
    Inverse,
    Det,
    Transpose,
    ConjTranspose,
}

#[derive(Debug)]
pub enum MatrixOpResult {
    Matrix(Matrix),
    Scalar(u32),
}

/// Dispatch form of the matrix operations; `b` is only used for `Mul`,
/// `twist` only for `ConjTranspose`.
pub fn matrix_ops(
    a: &Matrix,
    b: Option<&Matrix>,
    kind: MatrixOpKind,
    twist: u32,
) -> Result<MatrixOpResult, MatError> {
    Ok(match kind {
        MatrixOpKind::Mul => {
            MatrixOpResult::Matrix(a.mul(b.ok_or(MatError::DimensionMismatch)?)?)
        }
        MatrixOpKind::Inverse => MatrixOpResult::Matrix(a.inverse()?),
        MatrixOpKind::Det => MatrixOpResult::Scalar(a.det()),
        MatrixOpKind::Transpose => MatrixOpResult::Matrix(a.transpose()),
        MatrixOpKind::ConjTranspose => MatrixOpResult::Matrix(a.conj_transpose(twist)),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    None,
    Symplectic,
    Unitary,
    QuadraticPlus,
    QuadraticMinus,
    QuadraticOdd,
}

/// A classical form: the Gram matrix of the (bi/sesqui)linear form, plus the
/// quadratic coefficient table for orthogonal types, plus the Frobenius twist
/// for sesquilinearity in the unitary case.
#[derive(Clone, Debug)]
pub struct ClassicalForm {
    pub kind: FormKind,
    pub gram: Matrix,
    /// Upper-triangular coefficients of Q; polarization is gram = U + U^T.
    pub quad: Option<Matrix>,
    pub twist: u32,
}

impl ClassicalForm {
    /// B(x, y) with the second argument conjugated in the unitary case.
    pub fn bilinear(&self, x: &[u32], y: &[u32]) -> u32 {
        let f = self.gram.field();
        let n = self.gram.dim();
        let mut acc = 0u32;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n {
                let g = self.gram.at(i, j);
                if g == 0 || y[j] == 0 {
                    continue;
                }
                let yj = if self.kind == FormKind::Unitary {
                    f.frobenius(y[j], self.twist)
                } else {
                    y[j]
                };
                acc = f.add(acc, f.mul(x[i], f.mul(g, yj)));
            }
        }
        acc
    }

    pub fn quadratic(&self, x: &[u32]) -> u32 {
        let u = self.quad.as_ref().expect("quadratic form table present");
        let f = u.field();
        let n = u.dim();
        let mut acc = 0u32;
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in i..n {
                let c = u.at(i, j);
                if c == 0 || x[j] == 0 {
                    continue;
                }
                acc = f.add(acc, f.mul(c, f.mul(x[i], x[j])));
            }
        }
        acc
    }

    pub fn is_isotropic_vec(&self, x: &[u32]) -> bool {
        match self.kind {
            FormKind::QuadraticPlus | FormKind::QuadraticMinus | FormKind::QuadraticOdd => {
                self.quadratic(x) == 0
            }
            _ => self.bilinear(x, x) == 0,
        }
    }
}

/// True iff `a` preserves the form exactly.
pub fn preserves_form(a: &Matrix, form: &ClassicalForm) -> bool {
    let n = a.dim();
    match form.kind {
        FormKind::None => true,
        FormKind::Symplectic => {
            // A G A^T = G
            let aga = a.mul(&form.gram).unwrap().mul(&a.transpose()).unwrap();
            aga == form.gram
        }
        FormKind::Unitary => {
            let act = a
                .mul(&form.gram)
                .unwrap()
                .mul(&a.conj_transpose(form.twist))
                .unwrap();
            act == form.gram
        }
        FormKind::QuadraticPlus | FormKind::QuadraticMinus | FormKind::QuadraticOdd => {
            // polar form preserved and Q preserved on basis vectors
            let aga = a.mul(&form.gram).unwrap().mul(&a.transpose()).unwrap();
            if aga != form.gram {
                return false;
            }
            for i in 0..n {
                let row: Vec<u32> = (0..n).map(|j| a.at(i, j)).collect();
                let mut ei = vec![0u32; n];
                ei[i] = 1;
                if form.quadratic(&row) != form.quadratic(&ei) {
                    return false;
                }
            }
            true
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    SL,
    GL,
    SU,
    GU,
    Sp,
    OmegaPlus,
    OmegaMinus,
    SOOdd,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::SL => "SL",
            Family::GL => "GL",
            Family::SU => "SU",
            Family::GU => "GU",
            Family::Sp => "Sp",
            Family::OmegaPlus => "Omega+",
            Family::OmegaMinus => "Omega-",
            Family::SOOdd => "SO",
        };
        write!(f, "{s}")
    }
}

/// A classical group specification `(family, n, q)`, e.g. "SU-5-2".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MatGroupSpec {
    pub family: Family,
    pub n: usize,
    pub q: u64,
}

impl fmt::Display for MatGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}", self.family, self.n, self.q)
    }
}

impl FromStr for MatGroupSpec {
    type Err = MatError;

    fn from_str(s: &str) -> Result<Self, MatError> {
        let parts: Vec<&str> = s.split('-').collect();
        // "Omega+-6-2" splits awkwardly, so re-join family tokens
        let bad = || MatError::ParseSpec(s.to_string());
        if parts.len() < 3 {
            return Err(bad());
        }
        let (fam_str, n_str, q_str) = if parts.len() == 3 {
            (parts[0].to_string(), parts[1], parts[2])
        } else if parts.len() == 4 && parts[1].is_empty() {
            // "Omega+" written as "Omega+"; split yields ["Omega+", "", ...] only
            // when the name itself contains '-', i.e. "Omega-"
            (format!("{}-", parts[0]), parts[2], parts[3])
        } else {
            return Err(bad());
        };
        let family = match fam_str.as_str() {
            "SL" => Family::SL,
            "GL" => Family::GL,
            "SU" => Family::SU,
            "GU" => Family::GU,
            "Sp" => Family::Sp,
            "Omega+" | "OmegaPlus" => Family::OmegaPlus,
            "Omega-" | "OmegaMinus" => Family::OmegaMinus,
            "SO" => Family::SOOdd,
            _ => return Err(bad()),
        };
        let n: usize = n_str.parse().map_err(|_| bad())?;
        let q: u64 = q_str.parse().map_err(|_| bad())?;
        Ok(MatGroupSpec { family, n, q })
    }
}

/// Factor q = p^f with p prime, if it is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    for p in 2..=q {
        if !crate::util::is_prime(p) {
            continue;
        }
        if q % p != 0 {
            continue;
        }
        let mut f = 0u32;
        let mut m = q;
        while m % p == 0 {
            m /= p;
            f += 1;
        }
        return (m == 1).then_some((p, f));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Arc<Field> {
        let (p, f) = prime_power(q).unwrap();
        Field::new(p, f).unwrap()
    }

    #[test]
    fn identity_and_det() {
        let f7 = gf(7);
        let a = Matrix::from_rows(&f7, &[vec![3, 1], vec![2, 5]]);
        let id = Matrix::identity(&f7, 2);
        assert_eq!(id.mul(&a).unwrap(), a);
        assert_eq!(a.mul(&id).unwrap(), a);
        // det of diag(mu, 1) over GF(7) with mu = 3
        let d = Matrix::from_rows(&f7, &[vec![3, 0], vec![0, 1]]);
        assert_eq!(d.det(), 3);
    }

    #[test]
    fn inverse_against_adjugate_oracle() {
        // 2x2 over GF(9): random invertible A satisfies A * A^{-1} = I, and
        // the inverse matches the adjugate formula det^{-1} * [[d,-b],[-c,a]]
        let f9 = gf(9);
        let mut state = 7u32;
        let mut rng = move || {
            state = state.wrapping_mul(1103515245).wrapping_add(12345);
            state % 9
        };
        let id = Matrix::identity(&f9, 2);
        let mut checked = 0;
        while checked < 100 {
            let (a, b, c, d) = (rng(), rng(), rng(), rng());
            let m = Matrix::from_rows(&f9, &[vec![a, b], vec![c, d]]);
            let det = m.det();
            if det == 0 {
                continue;
            }
            checked += 1;
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv).unwrap(), id);
            let di = f9.inv(det).unwrap();
            let adj = Matrix::from_rows(
                &f9,
                &[
                    vec![f9.mul(di, d), f9.mul(di, f9.neg(b))],
                    vec![f9.mul(di, f9.neg(c)), f9.mul(di, a)],
                ],
            );
            assert_eq!(inv, adj);
        }
        // det = 1*1 - 2*2 = 1 - 1 = 0 in GF(9) (codes 2*2 = constant 4 = 1 mod 3)
        let sing = Matrix::from_rows(&f9, &[vec![1, 2], vec![2, 1]]);
        assert!(matches!(sing.inverse(), Err(MatError::Singular)));
    }

    #[test]
    fn spec_parsing() {
        let s: MatGroupSpec = "SU-5-2".parse().unwrap();
        assert_eq!(s.family, Family::SU);
        assert_eq!((s.n, s.q), (5, 2));
        assert_eq!(s.to_string(), "SU-5-2");
        let o: MatGroupSpec = "Omega--6-2".parse().unwrap();
        assert_eq!(o.family, Family::OmegaMinus);
        assert!("XX-1-2".parse::<MatGroupSpec>().is_err());
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(16), Some((2, 4)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(13), Some((13, 1)));
    }
}
