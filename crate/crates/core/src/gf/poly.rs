//! Dense polynomials over a prime field, used only while constructing
//! field levels (before log tables exist).

/// Coefficients low degree first. The zero polynomial is the empty vector.
pub(crate) type Poly = Vec<u32>;

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u64;
        }
        b = b * b % p as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo `m` (leading coefficient of `m` nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &c) in m.iter().enumerate() {
            let sub = (factor as u64 * c as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut out: Poly = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(a: &[u32], mut exp: u64, m: &[u32], p: u32) -> Poly {
    let mut acc: Poly = vec![1];
    let mut base = rem(a, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &base, m, p);
        }
        base = mulmod(&base, &base, m, p);
        exp >>= 1;
    }
    acc
}

/// Monic polynomial of degree `deg` whose non-leading coefficients are the
/// base-`p` digits of `index`, with `c_0` as the most significant digit.
///
/// Iterating `index` upward therefore walks the monic polynomials in
/// lexicographic order of `(c_0, c_1, ..., c_{deg-1})`.
pub(crate) fn monic_from_lex_index(mut index: u64, deg: usize, p: u32) -> Poly {
    let mut coeffs = vec![0u32; deg + 1];
    for i in (0..deg).rev() {
        coeffs[i] = (index % p as u64) as u32;
        index /= p as u64;
    }
    coeffs[deg] = 1;
    coeffs
}

/// Irreducibility by trial division against every monic polynomial of
/// degree at most `deg / 2`.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let divisor = monic_from_lex_index(idx, d, p);
            if rem(m, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}
