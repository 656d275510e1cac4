//! Dense univariate polynomials over F_p, lowest degree first.

use crate::field::PrimeField;

/// Removes trailing zero coefficients.
pub fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(f: &[u32]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn sub(field: PrimeField, f: &[u32], g: &[u32]) -> Vec<u32> {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| field.sub(f.get(i).copied().unwrap_or(0), g.get(i).copied().unwrap_or(0)))
        .collect();
    trim(out)
}

pub fn mul(field: PrimeField, f: &[u32], g: &[u32]) -> Vec<u32> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(a, b));
        }
    }
    trim(out)
}

/// Quotient and remainder. Panics if `g` is zero.
pub fn divrem(field: PrimeField, f: &[u32], g: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let dg = degree(g).expect("division by the zero polynomial");
    let mut r = trim(f.to_vec());
    let lead_inv = field.inv(g[dg]);
    let mut q = vec![0u32; r.len().saturating_sub(dg).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = field.mul(r[dr], lead_inv);
        let shift = dr - dg;
        q[shift] = c;
        for (i, &b) in g.iter().enumerate().take(dg + 1) {
            r[shift + i] = field.sub(r[shift + i], field.mul(c, b));
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn monic(field: PrimeField, f: &[u32]) -> Vec<u32> {
    match degree(f) {
        None => Vec::new(),
        Some(d) => {
            let inv = field.inv(f[d]);
            f[..=d].iter().map(|&c| field.mul(c, inv)).collect()
        }
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(field: PrimeField, f: &[u32], g: &[u32]) -> Vec<u32> {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(field, &a, &b);
        a = b;
        b = r;
    }
    monic(field, &a)
}

/// `base^e mod modulus`.
pub fn powmod(field: PrimeField, base: &[u32], mut e: u64, modulus: &[u32]) -> Vec<u32> {
    let mut acc = divrem(field, &[1], modulus).1;
    let mut b = divrem(field, base, modulus).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(field, &mul(field, &acc, &b), modulus).1;
        }
        b = divrem(field, &mul(field, &b, &b), modulus).1;
        e >>= 1;
    }
    acc
}

pub fn eval(field: PrimeField, f: &[u32], x: u32) -> u32 {
    f.iter().rev().fold(0, |acc, &c| field.add(field.mul(acc, x), c))
}

/// Distinct roots in F_p, sorted ascending.
pub fn roots(field: PrimeField, f: &[u32]) -> Vec<u32> {
    let f = trim(f.to_vec());
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let p = field.prime();
    if p < 64 {
        return (0..p).filter(|&x| eval(field, &f, x) == 0).collect();
    }
    // g = gcd(f, x^p - x) is the product of the distinct linear factors.
    let xp = powmod(field, &[0, 1], p as u64, &f);
    let g = gcd(field, &f, &sub(field, &xp, &[0, 1]));
    let mut out = Vec::new();
    split_linear(field, g, 0, &mut out);
    out.sort_unstable();
    out
}

/// Cantor–Zassenhaus equal-degree splitting for degree-one factors, with
/// shifts `a = start, start+1, ...` in place of random choices.
fn split_linear(field: PrimeField, g: Vec<u32>, start: u32, out: &mut Vec<u32>) {
    match degree(&g) {
        None | Some(0) => {}
        Some(1) => out.push(field.neg(field.mul(g[0], field.inv(g[1])))),
        Some(_) => {
            let p = field.prime();
            let mut a = start;
            loop {
                let h = powmod(field, &[a, 1], (p as u64 - 1) / 2, &g);
                let d = gcd(field, &g, &sub(field, &h, &[1]));
                let dd = degree(&d).unwrap_or(0);
                if dd > 0 && dd < degree(&g).unwrap() {
                    let (q, _) = divrem(field, &g, &d);
                    split_linear(field, d, (a + 1) % p, out);
                    split_linear(field, monic(field, &q), (a + 1) % p, out);
                    return;
                }
                a = (a + 1) % p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> PrimeField {
        PrimeField::new(32003).unwrap()
    }

    fn from_roots(f: PrimeField, rs: &[u32]) -> Vec<u32> {
        rs.iter().fold(vec![1], |acc, &r| mul(f, &acc, &[f.neg(r), 1]))
    }

    #[test]
    fn finds_split_roots() {
        let f = fp();
        let poly = from_roots(f, &[5, 17, 31999, 2]);
        assert_eq!(roots(f, &poly), vec![2, 5, 17, 31999]);
    }

    #[test]
    fn ignores_irreducible_quadratic() {
        let f = fp();
        let non_residue = (2..).find(|&n| f.pow(n, (32003 - 1) / 2) != 1).unwrap();
        let q = vec![f.neg(non_residue), 0, 1];
        let poly = mul(f, &q, &[f.neg(3), 1]);
        assert_eq!(roots(f, &poly), vec![3]);
    }

    #[test]
    fn small_prime_and_gcd() {
        let f = PrimeField::new(7).unwrap();
        let poly = from_roots(f, &[1, 1, 4]);
        assert_eq!(roots(f, &poly), vec![1, 4]);
        let g = gcd(f, &from_roots(f, &[1, 2]), &from_roots(f, &[2, 3]));
        assert_eq!(g, from_roots(f, &[2]));
    }
}
