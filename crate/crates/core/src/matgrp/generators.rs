//! Generator sets for the supported classical groups.
//!
//! The exact matrices are an implementation choice. Every construction is
//! certified: generators must preserve the returned form, and the group they
//! generate must have the standard order for the family, checked through a
//! faithful permutation action.

use super::{ClassicalForm, Family, FormKind, MatError, MatGroupSpec, Matrix};
use crate::gf::Field;
use crate::matgrp::{preserves_form, prime_power};
use crate::permcore::{BuildOpts, Perm, PermGroup, StabChain};
use num_bigint::BigUint;
use num_traits::One;
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct MatGroup {
    pub spec: MatGroupSpec,
    /// Field the matrices live over (GF(q^2) for unitary families).
    pub field: Arc<Field>,
    pub gens: Vec<Matrix>,
    pub form: Option<ClassicalForm>,
    pub expected_order: BigUint,
    /// Number of scalar matrices contained in the group, for cross-checking
    /// orders of projective images.
    pub scalar_count: BigUint,
}

/// Standard order formula for the family; these are treated as oracles and the
/// generated groups must match them.
pub fn expected_order(spec: &MatGroupSpec) -> Result<BigUint, MatError> {
    let q = spec.q;
    let n = spec.n as u32;
    let unsupported = || MatError::UnsupportedSpec(spec.to_string());
    let qp = |e: u32| num_traits::pow::pow(BigUint::from(q), e as usize);
    Ok(match spec.family {
        Family::GL | Family::SL => {
            let mut o = BigUint::one();
            let qn = qp(n);
            for i in 0..n {
                o *= &qn - qp(i);
            }
            if spec.family == Family::SL {
                o /= BigUint::from(q - 1);
            }
            o
        }
        Family::GU | Family::SU => {
            let mut o = qp(n * (n - 1) / 2);
            for i in 1..=n {
                let term = if i % 2 == 0 {
                    qp(i) - BigUint::one()
                } else {
                    qp(i) + BigUint::one()
                };
                o *= term;
            }
            if spec.family == Family::SU {
                o /= BigUint::from(q + 1);
            }
            o
        }
        Family::Sp => {
            if n % 2 != 0 {
                return Err(unsupported());
            }
            let m = n / 2;
            let mut o = qp(m * m);
            for i in 1..=m {
                o *= qp(2 * i) - BigUint::one();
            }
            o
        }
        Family::OmegaPlus | Family::OmegaMinus => {
            if n % 2 != 0 {
                return Err(unsupported());
            }
            let m = n / 2;
            let mut o = qp(m * (m - 1));
            o *= if spec.family == Family::OmegaPlus {
                qp(m) - BigUint::one()
            } else {
                qp(m) + BigUint::one()
            };
            for i in 1..m {
                o *= qp(2 * i) - BigUint::one();
            }
            if q % 2 == 1 {
                o /= BigUint::from(2u32);
            }
            o
        }
        Family::SOOdd => {
            if n % 2 != 1 {
                return Err(unsupported());
            }
            let m = (n as u32 - 1) / 2;
            let mut o = qp(m * m);
            for i in 1..=m {
                o *= qp(2 * i) - BigUint::one();
            }
            o
        }
    })
}

fn supported(spec: &MatGroupSpec) -> bool {
    let MatGroupSpec { family, n, q } = *spec;
    if prime_power(q).is_none() {
        return false;
    }
    match family {
        Family::SL | Family::GL => (2..=6).contains(&n) && q <= 13,
        Family::SU | Family::GU => (2..=5).contains(&n) && q <= 4,
        Family::Sp => n == 4 && q <= 8,
        Family::OmegaPlus | Family::OmegaMinus => (n == 4 || n == 6 || n == 8) && q <= 3,
        Family::SOOdd => (n == 3 || n == 5 || n == 7) && q == 3,
    }
}

fn scalar_count(spec: &MatGroupSpec) -> BigUint {
    let n = spec.n as u64;
    let q = spec.q;
    let g = match spec.family {
        Family::SL => num_integer::gcd(n, q - 1),
        Family::GL => q - 1,
        Family::SU => num_integer::gcd(n, q + 1),
        Family::GU => q + 1,
        Family::Sp => num_integer::gcd(2, q - 1),
        // not used for the orthogonal families (certified on vectors)
        Family::OmegaPlus | Family::OmegaMinus | Family::SOOdd => 1,
    };
    BigUint::from(g)
}

pub fn classical_generators(spec: &MatGroupSpec) -> Result<MatGroup, MatError> {
    if !supported(spec) {
        return Err(MatError::UnsupportedSpec(spec.to_string()));
    }
    let (p, f) = prime_power(spec.q).unwrap();
    let mg = match spec.family {
        Family::SL | Family::GL => {
            let field = Field::new(p, f)?;
            linear_group(spec, &field)
        }
        Family::SU | Family::GU => {
            let field = Field::new(p, 2 * f)?;
            unitary_group(spec, &field, f)?
        }
        Family::Sp => {
            let field = Field::new(p, f)?;
            symplectic_group(spec, &field)?
        }
        Family::OmegaPlus | Family::OmegaMinus | Family::SOOdd => {
            let field = Field::new(p, f)?;
            orthogonal_group(spec, &field)?
        }
    };
    if let Some(form) = &mg.form {
        for g in &mg.gens {
            if !preserves_form(g, form) {
                return Err(MatError::GeneratorSearch(format!(
                    "{spec}: generator violates the form"
                )));
            }
        }
    }
    Ok(mg)
}

fn linear_group(spec: &MatGroupSpec, field: &Arc<Field>) -> MatGroup {
    let n = spec.n;
    let mut gens = Vec::new();
    let mut t1 = Matrix::identity(field, n);
    t1.set(0, 1, 1);
    gens.push(t1);
    let mut t2 = Matrix::identity(field, n);
    t2.set(1, 0, 1);
    gens.push(t2);
    let mu = field.primitive();
    if field.q() > 2 {
        let mut h = Matrix::identity(field, n);
        h.set(0, 0, mu);
        h.set(1, 1, field.inv(mu).unwrap());
        gens.push(h);
    }
    // signed cycle with determinant one
    let mut c = Matrix::zero(field, n);
    for i in 0..n - 1 {
        c.set(i, i + 1, 1);
    }
    let sign = if (n - 1) % 2 == 0 { 1 } else { field.neg(1) };
    c.set(n - 1, 0, sign);
    gens.push(c);
    if spec.family == Family::GL && field.q() > 2 {
        let mut d = Matrix::identity(field, n);
        d.set(0, 0, mu);
        gens.push(d);
    }
    MatGroup {
        spec: *spec,
        field: Arc::clone(field),
        gens,
        form: None,
        expected_order: expected_order(spec).unwrap(),
        scalar_count: scalar_count(spec),
    }
}

/// Scan small unipotent shapes `I + sum a_k E_{positions[k]}` for the first
/// assignment (first coordinate nonzero) preserving the form with det 1.
fn search_unipotent(
    field: &Arc<Field>,
    n: usize,
    positions: &[(usize, usize)],
    form: &ClassicalForm,
) -> Option<Matrix> {
    let q = field.q() as u64;
    let k = positions.len();
    let total = q.pow(k as u32);
    for code in 0..total {
        let mut vals = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            vals.push((c % q) as u32);
            c /= q;
        }
        if vals[0] == 0 {
            continue;
        }
        let mut m = Matrix::identity(field, n);
        for (i, &(r, cl)) in positions.iter().enumerate() {
            m.set(r, cl, vals[i]);
        }
        if m.det() == 1 && preserves_form(&m, form) {
            return Some(m);
        }
    }
    None
}

fn embed_2x2(field: &Arc<Field>, n: usize, i: usize, j: usize, block: [[u32; 2]; 2]) -> Matrix {
    let mut m = Matrix::identity(field, n);
    m.set(i, i, block[0][0]);
    m.set(i, j, block[0][1]);
    m.set(j, i, block[1][0]);
    m.set(j, j, block[1][1]);
    m
}

/// Permutation matrix swapping hyperbolic pairs `a` and `b` (coordinates
/// a <-> b and n-1-a <-> n-1-b).
fn pair_swap(field: &Arc<Field>, n: usize, a: usize, b: usize) -> Matrix {
    let mut m = Matrix::zero(field, n);
    let mut image: Vec<usize> = (0..n).collect();
    image.swap(a, b);
    image.swap(n - 1 - a, n - 1 - b);
    for (i, &to) in image.iter().enumerate() {
        m.set(i, to, 1);
    }
    m
}

fn symplectic_form(field: &Arc<Field>, n: usize) -> ClassicalForm {
    let m = n / 2;
    let mut gram = Matrix::zero(field, n);
    for i in 0..m {
        gram.set(i, n - 1 - i, 1);
        gram.set(n - 1 - i, i, field.neg(1));
    }
    ClassicalForm {
        kind: FormKind::Symplectic,
        gram,
        quad: None,
        twist: 0,
    }
}

fn symplectic_group(spec: &MatGroupSpec, field: &Arc<Field>) -> Result<MatGroup, MatError> {
    let n = spec.n;
    let form = symplectic_form(field, n);
    let mu = field.primitive();
    let mut gens = Vec::new();
    // full SL2 on the outer hyperbolic pair
    gens.push(embed_2x2(field, n, 0, n - 1, [[1, 1], [0, 1]]));
    gens.push(embed_2x2(field, n, 0, n - 1, [[1, 0], [1, 1]]));
    if field.q() > 2 {
        gens.push(embed_2x2(
            field,
            n,
            0,
            n - 1,
            [[mu, 0], [0, field.inv(mu).unwrap()]],
        ));
    }
    if n >= 4 {
        gens.push(pair_swap(field, n, 0, 1));
        for shape in [
            vec![(0, 1), (n - 2, n - 1)],
            vec![(1, 0), (n - 1, n - 2)],
        ] {
            if let Some(m) = search_unipotent(field, n, &shape, &form) {
                gens.push(m);
            }
        }
    }
    Ok(MatGroup {
        spec: *spec,
        field: Arc::clone(field),
        gens,
        form: Some(form),
        expected_order: expected_order(spec)?,
        scalar_count: scalar_count(spec),
    })
}

fn unitary_form(field: &Arc<Field>, n: usize, twist: u32) -> ClassicalForm {
    let mut gram = Matrix::zero(field, n);
    for i in 0..n {
        gram.set(i, n - 1 - i, 1);
    }
    ClassicalForm {
        kind: FormKind::Unitary,
        gram,
        quad: None,
        twist,
    }
}

/// All of SU(2, q) with respect to the antidiagonal hermitian form, by direct
/// scan over 2x2 matrices; only used for q <= 4.
fn su2_block_elements(field: &Arc<Field>, twist: u32) -> Vec<[[u32; 2]; 2]> {
    let form = unitary_form(field, 2, twist);
    let q2 = field.q();
    let mut out = Vec::new();
    for a in 0..q2 {
        for b in 0..q2 {
            for c in 0..q2 {
                for d in 0..q2 {
                    let m = Matrix::from_rows(field, &[vec![a, b], vec![c, d]]);
                    if m.det() == 1 && preserves_form(&m, &form) {
                        out.push([[a, b], [c, d]]);
                    }
                }
            }
        }
    }
    out
}

fn unitary_group(
    spec: &MatGroupSpec,
    field: &Arc<Field>,
    twist: u32,
) -> Result<MatGroup, MatError> {
    let n = spec.n;
    let q = spec.q as u32;
    let form = unitary_form(field, n, twist);
    let lambda = field.primitive();
    let mut gens = Vec::new();

    let block = su2_block_elements(field, twist);
    for b in block.iter().filter(|b| **b != [[1, 0], [0, 1]]).take(3) {
        gens.push(embed_2x2(field, n, 0, n - 1, *b));
    }
    if n >= 3 {
        // torus diag(alpha, 1, ..., 1, alpha^{-1}) with alpha generating F_q*
        let alpha = field.pow(lambda, (q + 1) as u64);
        if alpha != 1 {
            let mut h = Matrix::identity(field, n);
            h.set(0, 0, alpha);
            h.set(n - 1, n - 1, field.inv(alpha).unwrap());
            gens.push(h);
        }
        // one mixing root element per shape; the scan finds valid coefficients
        let mid = (n - 1) / 2;
        let mut shapes: Vec<Vec<(usize, usize)>> = Vec::new();
        if n % 2 == 1 {
            shapes.push(vec![(0, mid), (mid, n - 1), (0, n - 1)]);
        }
        for j in 1..n - 1 {
            if j != n - 1 - j {
                shapes.push(vec![(0, j), (n - 1 - j, n - 1), (0, n - 1)]);
            }
        }
        for shape in shapes {
            if let Some(m) = search_unipotent(field, n, &shape, &form) {
                gens.push(m);
            }
        }
        if n >= 4 {
            gens.push(pair_swap(field, n, 0, 1));
        }
    }
    if spec.family == Family::GU {
        let mut d = Matrix::identity(field, n);
        d.set(0, 0, lambda);
        d.set(n - 1, n - 1, field.inv(field.frobenius(lambda, twist)).unwrap());
        gens.push(d);
    }
    Ok(MatGroup {
        spec: *spec,
        field: Arc::clone(field),
        gens,
        form: Some(form),
        expected_order: expected_order(spec)?,
        scalar_count: scalar_count(spec),
    })
}

fn quadratic_form(field: &Arc<Field>, n: usize, kind: FormKind) -> ClassicalForm {
    let mut u = Matrix::zero(field, n);
    match kind {
        FormKind::QuadraticPlus => {
            for i in 0..n / 2 {
                u.set(i, n - 1 - i, 1);
            }
        }
        FormKind::QuadraticMinus => {
            let m = n / 2;
            for i in 0..m - 1 {
                u.set(i, n - 1 - i, 1);
            }
            // anisotropic middle block x^2 + xy + delta y^2
            let delta = if field.q() == 2 { 1 } else { 2 };
            u.set(m - 1, m - 1, 1);
            u.set(m - 1, m, 1);
            u.set(m, m, delta);
        }
        FormKind::QuadraticOdd => {
            let m = n / 2;
            for i in 0..m {
                u.set(i, n - 1 - i, 1);
            }
            u.set(m, m, 1);
        }
        _ => unreachable!(),
    }
    let gram = {
        let ut = u.transpose();
        let mut g = Matrix::zero(field, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, field.add(u.at(i, j), ut.at(i, j)));
            }
        }
        g
    };
    ClassicalForm {
        kind,
        gram,
        quad: Some(u),
        twist: 0,
    }
}

fn decode_vec(code: u64, q: u64, n: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(n);
    let mut c = code;
    for _ in 0..n {
        v.push((c % q) as u32);
        c /= q;
    }
    v
}

/// Eichler transformation for a singular u and v in u-perp:
/// x -> x + B(x,v)u - B(x,u)v - Q(v)B(x,u)u. Lies in Omega.
fn eichler(field: &Arc<Field>, form: &ClassicalForm, u: &[u32], v: &[u32]) -> Matrix {
    let n = u.len();
    let qv = form.quadratic(v);
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 1;
        let bu = form.bilinear(&e, u);
        let bv = form.bilinear(&e, v);
        let mut row = e;
        for j in 0..n {
            let mut x = row[j];
            x = field.add(x, field.mul(bv, u[j]));
            x = field.sub(x, field.mul(bu, v[j]));
            x = field.sub(x, field.mul(qv, field.mul(bu, u[j])));
            row[j] = x;
        }
        rows.push(row);
    }
    Matrix::from_rows(field, &rows)
}

/// Reflection in an anisotropic vector (q odd).
fn reflection(field: &Arc<Field>, form: &ClassicalForm, v: &[u32]) -> Matrix {
    let n = v.len();
    let qv_inv = field.inv(form.quadratic(v)).unwrap();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 1;
        let c = field.mul(form.bilinear(&e, v), qv_inv);
        let mut row = e;
        for j in 0..n {
            row[j] = field.sub(row[j], field.mul(c, v[j]));
        }
        rows.push(row);
    }
    Matrix::from_rows(field, &rows)
}

/// Orthogonal groups are grown from Eichler transformations in deterministic
/// scan order until the permutation image on nonzero vectors certifies the
/// target order.
fn orthogonal_group(spec: &MatGroupSpec, field: &Arc<Field>) -> Result<MatGroup, MatError> {
    let n = spec.n;
    let q = spec.q;
    let kind = match spec.family {
        Family::OmegaPlus => FormKind::QuadraticPlus,
        Family::OmegaMinus => FormKind::QuadraticMinus,
        Family::SOOdd => FormKind::QuadraticOdd,
        _ => unreachable!(),
    };
    let form = quadratic_form(field, n, kind);
    let omega_order = match spec.family {
        Family::SOOdd => expected_order(spec)? / BigUint::from(2u32),
        _ => expected_order(spec)?,
    };

    let total = q.pow(n as u32);
    let singular: Vec<Vec<u32>> = (1..total)
        .map(|c| decode_vec(c, q, n))
        .filter(|v| form.quadratic(v) == 0)
        .collect();
    if singular.is_empty() {
        return Err(MatError::GeneratorSearch(spec.to_string()));
    }

    // Round-robin over singular vectors u: Eichler maps with a single u only
    // generate a unipotent subgroup, so u must vary early in the scan.
    let mut gens: Vec<Matrix> = Vec::new();
    let mut cursor: Vec<u64> = vec![1; singular.len()];
    let mut since_check = 0usize;
    let mut certified = false;
    'outer: while !certified {
        let mut progressed = false;
        for (ui, u) in singular.iter().enumerate() {
            let m = loop {
                let c = cursor[ui];
                if c >= total {
                    break None;
                }
                cursor[ui] += 1;
                let v = decode_vec(c, q, n);
                if form.bilinear(u, &v) != 0 || is_multiple(field, &v, u) {
                    continue;
                }
                let m = eichler(field, &form, u, &v);
                if m.is_identity() || !preserves_form(&m, &form) || gens.contains(&m) {
                    continue;
                }
                break Some(m);
            };
            let Some(m) = m else { continue };
            progressed = true;
            gens.push(m);
            since_check += 1;
            if since_check >= 8 || gens.len() > 120 {
                since_check = 0;
                if certify_on_vectors(field, &gens, n, &omega_order).is_ok() {
                    certified = true;
                    break 'outer;
                }
            }
        }
        if !progressed {
            break;
        }
    }
    if !certified {
        certify_on_vectors(field, &gens, n, &omega_order)
            .map_err(|_| MatError::GeneratorSearch(spec.to_string()))?;
    }

    if spec.family == Family::SOOdd {
        // adjoin a rotation with nonsquare spinor norm: r_u r_v with Q(u)
        // a square and Q(v) a nonsquare
        let find = |target_square: bool| -> Option<Vec<u32>> {
            (1..total).map(|c| decode_vec(c, q, n)).find(|v| {
                let qv = form.quadratic(v);
                qv != 0 && is_square(field, qv) == target_square
            })
        };
        let u = find(true).ok_or_else(|| MatError::GeneratorSearch(spec.to_string()))?;
        let v = find(false).ok_or_else(|| MatError::GeneratorSearch(spec.to_string()))?;
        let s = reflection(field, &form, &u)
            .mul(&reflection(field, &form, &v))
            .unwrap();
        gens.push(s);
        certify_on_vectors(field, &gens, n, &expected_order(spec)?)
            .map_err(|_| MatError::GeneratorSearch(spec.to_string()))?;
    }

    Ok(MatGroup {
        spec: *spec,
        field: Arc::clone(field),
        gens,
        form: Some(form),
        expected_order: expected_order(spec)?,
        scalar_count: BigUint::one(),
    })
}

fn is_multiple(field: &Arc<Field>, v: &[u32], u: &[u32]) -> bool {
    // v = c*u for some scalar c
    let mut ratio: Option<u32> = None;
    for (&a, &b) in v.iter().zip(u) {
        match (a, b) {
            (0, 0) => continue,
            (_, 0) | (0, _) => return false,
            (a, b) => {
                let c = field.div(a, b).unwrap();
                if let Some(r) = ratio {
                    if r != c {
                        return false;
                    }
                } else {
                    ratio = Some(c);
                }
            }
        }
    }
    true
}

fn is_square(field: &Arc<Field>, a: u32) -> bool {
    if a == 0 {
        return true;
    }
    let h = (field.q() as u64 - 1) / 2;
    field.pow(a, h) == 1
}

/// Faithful action on nonzero vectors; vector with code c+1 is point c.
pub fn vector_action(field: &Arc<Field>, gens: &[Matrix], n: usize) -> Vec<Perm> {
    let q = field.q() as u64;
    let total = q.pow(n as u32);
    let degree = (total - 1) as usize;
    let encode = |v: &[u32]| -> u64 {
        let mut code = 0u64;
        for &x in v.iter().rev() {
            code = code * q + x as u64;
        }
        code
    };
    gens.iter()
        .map(|m| {
            let images: Vec<u32> = (1..total)
                .map(|c| {
                    let v = decode_vec(c, q, n);
                    let w = m.apply_row(&v);
                    (encode(&w) - 1) as u32
                })
                .collect();
            Perm::from_images(images).expect("linear maps permute nonzero vectors")
        })
        .map(|p| {
            debug_assert_eq!(p.degree(), degree);
            p
        })
        .collect()
}

fn certify_on_vectors(
    field: &Arc<Field>,
    gens: &[Matrix],
    n: usize,
    target: &BigUint,
) -> Result<(), MatError> {
    if gens.is_empty() {
        return Err(MatError::GeneratorSearch("no generators".into()));
    }
    let perms = vector_action(field, gens, n);
    let degree = perms[0].degree();
    StabChain::build(
        degree,
        &perms,
        BuildOpts {
            seed: 0xC347,
            base_hint: vec![],
            target_order: Some(target.clone()),
        },
    )
    .map_err(|_| MatError::GeneratorSearch("order certification failed".into()))?;
    Ok(())
}

/// Permutation group of the matrix group acting on nonzero vectors, with the
/// certified order attached.
pub fn vector_perm_group(mg: &MatGroup) -> Result<PermGroup, MatError> {
    let perms = vector_action(&mg.field, &mg.gens, mg.spec.n);
    let degree = perms[0].degree();
    PermGroup::with_known_order(degree, perms, mg.expected_order.clone())
        .map_err(|_| MatError::GeneratorSearch("vector action".into()))
}
