//! Factorization of univariate polynomials over the rationals.
//!
//! Square-free parts come from Yun's algorithm. Each square-free part is then
//! split into irreducibles by the Zassenhaus method: factor modulo a small
//! prime (distinct-degree then Cantor-Zassenhaus equal-degree splitting),
//! Hensel-lift to a modulus exceeding the Mignotte bound, and recombine
//! modular factors by trial division over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Polynomial;
use super::rational::Rational;

/// Yun's square-free decomposition of a nonzero polynomial.
///
/// Returns `(g_i, i)` with each `g_i` monic, square-free, pairwise coprime and
/// `monic(f) = prod g_i^i`. Factors equal to one are omitted.
pub fn square_free_decomposition(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let f = f.monic();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0);
    let c = df.div_exact(&a0);
    let mut d = &c - &b.derivative();
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.div_exact(&a);
        let c = d.div_exact(&a);
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Complete factorization over the rationals into monic irreducible factors
/// with multiplicities, sorted by (degree, coefficients).
pub fn factor_over_q(f: &Polynomial) -> Vec<(Polynomial, usize)> {
    let mut out = Vec::new();
    for (g, mult) in square_free_decomposition(f) {
        for h in factor_square_free(&g) {
            out.push((h, mult));
        }
    }
    out.sort();
    out
}

/// Irreducible monic factors of a monic square-free polynomial.
fn factor_square_free(g: &Polynomial) -> Vec<Polynomial> {
    if g.degree().unwrap_or(0) <= 1 {
        return vec![g.clone()];
    }
    let z = to_primitive_integer(g);
    let mut parts = Vec::new();
    // Split off a factor x so the remaining constant term is nonzero.
    let mut z = z;
    if z[0].is_zero() {
        parts.push(vec![BigInt::zero(), BigInt::one()]);
        z.remove(0);
    }
    parts.extend(zassenhaus(&z));
    let mut out: Vec<Polynomial> = parts.iter().map(|p| from_integer(p).monic()).collect();
    out.retain(|p| p.degree().unwrap_or(0) > 0);
    out.sort();
    out
}

type ZPoly = Vec<BigInt>;
type FpPoly = Vec<u64>;

fn to_primitive_integer(g: &Polynomial) -> ZPoly {
    let l = g
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut z: ZPoly = g
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&l / c.denom()))
        .collect();
    let content = z.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in &mut z {
            *c /= &content;
        }
    }
    if z.last().is_some_and(Signed::is_negative) {
        for c in &mut z {
            *c = -&*c;
        }
    }
    z
}

fn from_integer(z: &[BigInt]) -> Polynomial {
    Polynomial::from_coeffs(
        z.iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect(),
    )
}

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
    a
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zsub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

/// Coefficients reduced into the symmetric range `(-m/2, m/2]`.
fn zsymmetric_mod(a: &[BigInt], m: &BigInt) -> ZPoly {
    let half = m >> 1u32;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn zcontent_free(a: &[BigInt]) -> ZPoly {
    let content = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: ZPoly = if content.is_zero() {
        a.to_vec()
    } else {
        a.iter().map(|c| c / &content).collect()
    };
    if out.last().is_some_and(Signed::is_negative) {
        for c in &mut out {
            *c = -&*c;
        }
    }
    out
}

/// Exact division over the integers, `None` if `b` does not divide `a`.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = b.len().checked_sub(1)?;
    if a.len() < b.len() {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let lc = &b[db];
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for k in (0..quot.len()).rev() {
        let top = &rem[k + db];
        if top.is_zero() {
            continue;
        }
        let (q, r) = top.div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        for (i, c) in b.iter().enumerate() {
            rem[k + i] -= &q * c;
        }
        quot[k] = q;
    }
    if rem.iter().all(Zero::is_zero) {
        Some(ztrim(quot))
    } else {
        None
    }
}

fn to_fp(a: &[BigInt], p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    fp_trim(
        a.iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits in u64"))
            .collect(),
    )
}

fn from_fp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn fp_trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Arithmetic in `F_p[x]` for a small odd prime.
struct Fp {
    p: u64,
}

impl Fp {
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        fp_trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + self.p - b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }

    fn mul_poly(&self, a: &[u64], b: &[u64]) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        fp_trim(out)
    }

    fn scale(&self, a: &[u64], c: u64) -> FpPoly {
        fp_trim(a.iter().map(|&x| self.mul(x, c)).collect())
    }

    fn monic(&self, a: &[u64]) -> FpPoly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    fn div_rem(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        let db = b.len() - 1;
        if a.len() < b.len() {
            return (Vec::new(), a.to_vec());
        }
        let inv = self.inv(b[db]);
        let mut rem = a.to_vec();
        let mut quot = vec![0u64; a.len() - db];
        for k in (0..quot.len()).rev() {
            let c = self.mul(rem[k + db], inv);
            if c == 0 {
                continue;
            }
            for (i, &bi) in b.iter().enumerate() {
                rem[k + i] = (rem[k + i] + self.p - self.mul(c, bi)) % self.p;
            }
            quot[k] = c;
        }
        rem.truncate(db);
        (fp_trim(quot), fp_trim(rem))
    }

    fn rem(&self, a: &[u64], b: &[u64]) -> FpPoly {
        self.div_rem(a, b).1
    }

    fn gcd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s a + t b = g`, `g` monic.
    fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly, FpPoly) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s = self.sub(&s0, &self.mul_poly(&q, &s1));
            let t = self.sub(&t0, &self.mul_poly(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let lc = *r0.last().expect("gcd of nonzero polynomials");
        let inv = self.inv(lc);
        (
            self.scale(&r0, inv),
            self.scale(&s0, inv),
            self.scale(&t0, inv),
        )
    }

    fn derivative(&self, a: &[u64]) -> FpPoly {
        fp_trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mul(c, i as u64 % self.p))
                .collect(),
        )
    }

    fn powmod(&self, base: &[u64], mut e: u128, modulus: &[u64]) -> FpPoly {
        let mut result = vec![1u64];
        let mut b = self.rem(base, modulus);
        while e > 0 {
            if e & 1 == 1 {
                result = self.rem(&self.mul_poly(&result, &b), modulus);
            }
            b = self.rem(&self.mul_poly(&b, &b), modulus);
            e >>= 1;
        }
        result
    }

    /// Distinct-degree factorization of a monic square-free polynomial:
    /// pairs `(product of all irreducible factors of degree d, d)`.
    fn distinct_degree(&self, f: &[u64]) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let mut d = 0;
        while f.len() > 1 {
            d += 1;
            if 2 * d > f.len() - 1 {
                let deg = f.len() - 1;
                out.push((f, deg));
                break;
            }
            h = self.powmod(&h, self.p as u128, &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            if g.len() > 1 {
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        out
    }

    /// Cantor-Zassenhaus splitting of a product of degree-`d` irreducibles.
    fn equal_degree(&self, f: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        let n = f.len() - 1;
        if n == d {
            out.push(f.to_vec());
            return;
        }
        let exponent = (u128::from(self.p).pow(d as u32) - 1) / 2;
        loop {
            let a: FpPoly = fp_trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = self.sub(&self.powmod(&a, exponent, f), &[1]);
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let other = self.div_rem(f, &g).0;
                self.equal_degree(&g, d, rng, out);
                self.equal_degree(&self.monic(&other), d, rng, out);
                return;
            }
        }
    }

    fn factor_square_free(&self, f: &[u64]) -> Vec<FpPoly> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d ^ self.p);
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            self.equal_degree(&g, d, &mut rng, &mut out);
        }
        out.sort();
        out
    }
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..2000).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible factors over the integers of a primitive square-free
/// polynomial with positive leading coefficient and nonzero constant term.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let deg = f.len() - 1;
    if deg <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f[deg].clone();

    // Pick the good prime with the fewest modular factors among a handful.
    let mut best: Option<(u64, Vec<FpPoly>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let field = Fp { p };
        let fp = to_fp(f, p);
        if fp.len() != f.len() {
            continue;
        }
        let monic = field.monic(&fp);
        if field.gcd(&monic, &field.derivative(&monic)).len() != 1 {
            continue;
        }
        let factors = field.factor_square_free(&monic);
        if factors.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| factors.len() < b.len()) {
            best = Some((p, factors));
        }
        tried += 1;
        if tried == 5 {
            break;
        }
    }
    let (p, modular) = best.expect("a prime of good reduction exists below 2000");

    // Mignotte-style bound on the coefficients of any factor, scaled by lc.
    let norm_sq: BigInt = f.iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    let bound = (BigInt::one() << deg) * norm * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }

    let lifted = hensel_lift(f, &modular, p, k, &modulus);
    recombine(f.to_vec(), lifted, &modulus)
}

/// Lifts `f = lc * prod g_i (mod p)` to the same shape modulo `p^k`, returning
/// monic lifted factors.
fn hensel_lift(f: &[BigInt], factors: &[FpPoly], p: u64, k: u32, modulus: &BigInt) -> Vec<ZPoly> {
    let field = Fp { p };
    let mut current = f.to_vec();
    let mut out = Vec::with_capacity(factors.len());
    for i in 0..factors.len() - 1 {
        let lc_p = to_fp(&current[current.len() - 1..], p)[0];
        let rest = factors[i + 1..]
            .iter()
            .fold(vec![lc_p], |acc, g| field.mul_poly(&acc, g));
        let (g, h) = hensel_two(&current, &factors[i], &rest, &field, k);
        out.push(reduce_nonneg(&g, modulus));
        current = reduce_nonneg(&h, modulus);
    }
    // The last factor is the remaining cofactor made monic modulo p^k.
    let lc = current.last().expect("nonzero cofactor").clone();
    let inv = mod_inverse(&lc, modulus);
    let last: ZPoly = current
        .iter()
        .map(|c| (c * &inv).mod_floor(modulus))
        .collect();
    out.push(ztrim(last));
    out
}

fn reduce_nonneg(a: &[BigInt], m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    assert!(
        e.gcd.is_one(),
        "leading coefficient not invertible modulo p^k"
    );
    e.x.mod_floor(m)
}

/// Linear Hensel lifting of `f = g h (mod p)` to `f = G H (mod p^k)` with `G`
/// monic and `G = g`, `H = h (mod p)`.
fn hensel_two(f: &[BigInt], g: &[u64], h: &[u64], field: &Fp, k: u32) -> (ZPoly, ZPoly) {
    let (one, _, t) = field.ext_gcd(g, h);
    debug_assert_eq!(one, vec![1]);
    let mut big_g = from_fp(g);
    let mut big_h = from_fp(h);
    let pb = BigInt::from(field.p);
    let mut pj = pb.clone();
    for _ in 1..k {
        let err = zsub(f, &zmul(&big_g, &big_h));
        let scaled: ZPoly = err
            .iter()
            .map(|c| {
                debug_assert!((c % &pj).is_zero());
                c / &pj
            })
            .collect();
        let e = to_fp(&scaled, field.p);
        let dg = field.rem(&field.mul_poly(t.as_slice(), &e), g);
        let dh = field.div_rem(&field.sub(&e, &field.mul_poly(&dg, h)), g).0;
        big_g = add_scaled(&big_g, &dg, &pj);
        big_h = add_scaled(&big_h, &dh, &pj);
        pj *= &pb;
    }
    (big_g, big_h)
}

fn add_scaled(a: &[BigInt], d: &[u64], scale: &BigInt) -> ZPoly {
    let n = a.len().max(d.len());
    let zero = BigInt::zero();
    ztrim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) + BigInt::from(*d.get(i).unwrap_or(&0)) * scale)
            .collect(),
    )
}

/// Combines lifted modular factors into true integer factors.
fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut progress = false;
        for subset in combinations(lifted.len(), size) {
            let lc = f.last().expect("nonzero").clone();
            let product = subset.iter().fold(vec![lc.clone()], |acc, &i| {
                zsymmetric_mod(&zmul(&acc, &lifted[i]), modulus)
            });
            let candidate = zcontent_free(&zsymmetric_mod(&product, modulus));
            if candidate.len() < 2 {
                continue;
            }
            if let Some(q) = zdiv_exact(&f, &candidate) {
                found.push(candidate);
                f = q;
                let mut idx = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&idx);
                    idx += 1;
                    keep
                });
                progress = true;
                break;
            }
        }
        if !progress {
            size += 1;
        }
    }
    if f.len() > 1 {
        found.push(zcontent_free(&f));
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    fn product(factors: &[(Polynomial, usize)]) -> Polynomial {
        factors
            .iter()
            .fold(Polynomial::one(), |acc, (f, m)| &acc * &f.pow(*m as u32))
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)^2 (x^2+1)
        let f = &(&p(&[-1, 1]).pow(3) * &p(&[2, 1]).pow(2)) * &p(&[1, 0, 1]);
        let sqf = square_free_decomposition(&f);
        assert_eq!(
            sqf,
            vec![(p(&[1, 0, 1]), 1), (p(&[2, 1]), 2), (p(&[-1, 1]), 3)]
        );
        assert_eq!(product(&sqf), f);
        assert_eq!(
            square_free_decomposition(&p(&[0, 0, 0, 1])),
            vec![(p(&[0, 1]), 3)]
        );
    }

    #[test]
    fn irreducible_quartics_stay_whole() {
        // x^4 + 1 and x^4 - 10x^2 + 1 split modulo every prime.
        for f in [p(&[1, 0, 0, 0, 1]), p(&[1, 0, -10, 0, 1])] {
            assert_eq!(factor_over_q(&f), vec![(f.clone(), 1)]);
        }
    }

    #[test]
    fn splits_products() {
        let f = &(&p(&[-2, 0, 1]) * &p(&[-3, 0, 1])) * &p(&[-3, 1]);
        let got = factor_over_q(&f);
        assert_eq!(
            got,
            vec![(p(&[-3, 1]), 1), (p(&[-3, 0, 1]), 1), (p(&[-2, 0, 1]), 1)]
        );
    }

    #[test]
    fn non_monic_integer_factors() {
        // (3x^2 + 5)(7x^3 - 2x + 11)(2x - 1)
        let f = &(&p(&[5, 0, 3]) * &p(&[11, -2, 0, 7])) * &p(&[-1, 2]);
        let got = factor_over_q(&f);
        assert_eq!(got.len(), 3);
        assert_eq!(product(&got), f.monic());
        assert!(got.iter().any(|(g, _)| *g == p(&[5, 0, 3]).monic()));
    }

    #[test]
    fn cyclotomic_products() {
        // x^12 - 1 = prod over d | 12 of Phi_d
        let f = p(&[-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1]);
        let got = factor_over_q(&f);
        let degrees: Vec<usize> = got.iter().map(|(g, _)| g.degree().unwrap()).collect();
        assert_eq!(degrees, vec![1, 1, 2, 2, 2, 4]);
        assert_eq!(product(&got), f);
    }

    #[test]
    fn repeated_nonlinear_factors() {
        let f = &p(&[1, 0, 1]).pow(2) * &p(&[0, 1]).pow(3);
        assert_eq!(factor_over_q(&f), vec![(p(&[0, 1]), 3), (p(&[1, 0, 1]), 2)]);
    }
}
