//! Rational Newton-Puiseux expansion over a number field: the places of
//! `F(x, Y) = 0` above `x = 0`, each with its ramification index, residue
//! field and leading coefficient `gamma` of `S = gamma * x^e`.

use num_integer::Integer;

use crate::arith::unipoly::rat;
use crate::arith::{Embedding, NfElem, NfPoly, NumberField, UniPoly};
use crate::error::{Error, Result};

/// `rows[j]` is the coefficient of `Y^j`, a polynomial in `x` over the field.
pub type Biv = Vec<NfPoly>;

#[derive(Clone, Debug)]
pub struct Place {
    pub e: usize,
    /// Absolute residue field.
    pub field: NumberField,
    /// Embedding of the base field into `field`.
    pub emb: Embedding,
    pub gamma: NfElem,
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub places: Vec<Place>,
    /// Every edge root and field generator met on the way.
    pub trace: Vec<UniPoly>,
    /// Newton polygon steps used.
    pub steps: usize,
}

struct Branch {
    field: NumberField,
    emb: Embedding,
    g: Biv,
    r: usize,
    e: usize,
    gamma: NfElem,
}

fn order(f: &NfPoly) -> Option<usize> {
    f.iter().position(|c| !c.is_zero())
}

/// Lower convex hull of `(j, i)` points, as consecutive vertex pairs.
pub(crate) fn lower_hull(pts: &[(usize, usize)]) -> Vec<((usize, usize), (usize, usize))> {
    let mut hull: Vec<(usize, usize)> = Vec::new();
    for &pt in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a-pt
            let cross = (b.0 as i64 - a.0 as i64) * (pt.1 as i64 - a.1 as i64)
                - (b.1 as i64 - a.1 as i64) * (pt.0 as i64 - a.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Bezout pair `(u, v)` with `u m - v q = 1`.
fn bezout(m: i64, q: i64) -> (i64, i64) {
    let e = m.extended_gcd(&q);
    debug_assert_eq!(e.gcd, 1);
    (e.x, -e.y)
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

fn map_biv(emb: &Embedding, target: &NumberField, g: &Biv) -> Biv {
    g.iter().map(|row| emb.apply_poly(target, row)).collect()
}

/// `G(x, Y + c)` over the field.
fn shift_y(field: &NumberField, g: &Biv, c: &NfElem) -> Biv {
    let n = g.len();
    let deg_x = g.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut out: Biv = vec![vec![]; n];
    for x_i in 0..deg_x {
        let col: NfPoly = g
            .iter()
            .map(|row| row.get(x_i).cloned().unwrap_or_else(UniPoly::zero))
            .collect();
        let mut col = col;
        NumberField::ptrim(&mut col);
        let shifted = field.pshift(&col, c);
        for (j, coef) in shifted.into_iter().enumerate() {
            let row = &mut out[j];
            if row.len() <= x_i {
                row.resize(x_i + 1, UniPoly::zero());
            }
            row[x_i] = coef;
        }
    }
    for row in out.iter_mut() {
        NumberField::ptrim(row);
    }
    out
}

/// Substitute `x = xi^v x^m`, `Y = x^q (xi^u + Y)` and divide by `x^l`.
#[allow(clippy::too_many_arguments)]
fn edge_substitute(
    field: &NumberField,
    g: &Biv,
    xi: &NfElem,
    m: usize,
    q: usize,
    u: i64,
    v: i64,
    l: usize,
) -> Result<Biv> {
    let n = g.len();
    let xu = field.pow(xi, u)?;
    let xv = field.pow(xi, v)?;
    let mut xu_pows = vec![UniPoly::one()];
    for _ in 0..n {
        let last = xu_pows.last().unwrap().clone();
        xu_pows.push(field.mul(&last, &xu));
    }
    let mut out: Vec<Vec<NfElem>> = vec![vec![]; n];
    for (j, row) in g.iter().enumerate() {
        let mut xv_i = UniPoly::one();
        for (i, a) in row.iter().enumerate() {
            if i > 0 {
                xv_i = field.mul(&xv_i, &xv);
            }
            if a.is_zero() {
                continue;
            }
            let exp = m * i + q * j;
            debug_assert!(exp >= l);
            let exp = exp - l;
            let base = field.mul(a, &xv_i);
            for t in 0..=j {
                let c = field.mul(&base, &xu_pows[j - t]).scale(&rat(binom(j, t)));
                let target = &mut out[t];
                if target.len() <= exp {
                    target.resize(exp + 1, UniPoly::zero());
                }
                target[exp] = &target[exp] + &c;
            }
        }
    }
    for row in out.iter_mut() {
        NumberField::ptrim(row);
    }
    Ok(out)
}

/// All places of `F = 0` above `x = 0`, `F` monic in `Y` over `base`.
/// `max_steps` bounds the number of Newton polygon steps.
pub fn expand(base: &NumberField, f: &Biv, max_steps: usize) -> Result<Expansion> {
    let mut places = Vec::new();
    let mut trace = Vec::new();
    let mut work = Vec::new();
    let f0: NfPoly = {
        let mut c: NfPoly = f
            .iter()
            .map(|row| row.first().cloned().unwrap_or_else(UniPoly::zero))
            .collect();
        NumberField::ptrim(&mut c);
        c
    };
    for (phi, r) in base.factor(&f0)? {
        let (field, emb) = base.adjoin(&phi)?;
        trace.push(emb.root.clone());
        trace.push(field.minpoly().clone());
        let g = shift_y(&field, &map_biv(&emb, &field, f), &emb.root);
        let branch = Branch { field, emb, g, r, e: 1, gamma: UniPoly::one() };
        if r == 1 {
            places.push(finish(branch));
        } else {
            work.push(branch);
        }
    }
    let mut steps = 0;
    while let Some(mut b) = work.pop() {
        steps += 1;
        if steps > max_steps {
            return Err(Error::UnstableResidueField { prec: max_steps });
        }
        if b.g[0].is_empty() {
            // Y = 0 is an exact root
            places.push(Place {
                e: b.e,
                field: b.field.clone(),
                emb: b.emb.clone(),
                gamma: b.gamma.clone(),
            });
            b.g.remove(0);
            b.r -= 1;
            if b.r == 1 {
                places.push(finish(b));
            } else if b.r > 1 {
                work.push(b);
            }
            continue;
        }
        let pts: Vec<(usize, usize)> = (0..=b.r)
            .filter_map(|j| order(&b.g[j]).map(|i| (j, i)))
            .collect();
        for ((j0, i0), (j1, i1)) in lower_hull(&pts) {
            let (dj, di) = (j1 - j0, i0 - i1);
            let gg = dj.gcd(&di);
            let (q, m) = (di / gg, dj / gg);
            let l = m * i0 + q * j0;
            let phi: NfPoly = (0..=gg)
                .map(|k| {
                    b.g[j0 + m * k]
                        .get(i0 - q * k)
                        .cloned()
                        .unwrap_or_else(UniPoly::zero)
                })
                .collect();
            let (u, v) = bezout(m as i64, q as i64);
            for (psi, r2) in b.field.factor(&phi)? {
                let (field, e2) = b.field.adjoin(&psi)?;
                let xi = e2.root.clone();
                trace.push(xi.clone());
                trace.push(field.minpoly().clone());
                let g = map_biv(&e2, &field, &b.g);
                let g = edge_substitute(&field, &g, &xi, m, q, u, v, l)?;
                let gamma = field.mul(&e2.apply(&field, &b.gamma), &field.pow(&xi, v * b.e as i64)?);
                trace.push(gamma.clone());
                let next = Branch {
                    emb: b.emb.then(&e2, &field),
                    field,
                    g,
                    r: r2,
                    e: b.e * m,
                    gamma,
                };
                if r2 == 1 {
                    places.push(finish(next));
                } else {
                    work.push(next);
                }
            }
        }
    }
    Ok(Expansion { places, trace, steps })
}

fn finish(b: Branch) -> Place {
    Place { e: b.e, field: b.field, emb: b.emb, gamma: b.gamma }
}

/// `F(z + x, Y)` for a bivariate given by rational rows in `T`, where `z` is
/// the generator of `field`.
pub fn local_rows(field: &NumberField, rows: &[UniPoly]) -> Biv {
    let z = field.gen();
    rows.iter()
        .map(|r| field.pshift(&field.lift(r), &z))
        .collect()
}
