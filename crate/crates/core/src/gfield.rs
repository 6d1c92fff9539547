//! Two-level tower of finite fields: F_p -> F_q = F_p[y]/(g) -> F_{q^m} = F_q[x]/(h).
//!
//! `FieldCtx` owns the tower: the defining polynomials, dense F_q arithmetic
//! tables, the reduction rows for h, the Frobenius matrix of x -> x^q and the
//! trace row. All arithmetic is exact; there are no probabilistic paths.
//!
//! An `Elt` is the coordinate vector of an element of F_{q^m} in the
//! polynomial basis {1, x, .., x^{m-1}}, each coordinate an F_q scalar packed
//! as sum(digit_i * p^i). An `Elt` carries no pointer back to its context;
//! operations take `&FieldCtx` explicitly and mixing contexts is a caller bug.
//!
//! Deterministic construction: g and h are the smallest monic irreducible
//! polynomials in value order (a polynomial is read as an integer with the
//! constant term as the least significant digit), and `alpha` is the smallest
//! element of full multiplicative order under the same value order.

use crate::error::{Error, Result};
use crate::linalg::FqMat;

/// Scalar of the middle field F_q, packed as sum(digit_i * p^i).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
#[repr(transparent)]
pub struct Fq(pub u16);

/// Element of F_{q^m}: coordinates in the polynomial basis of h, length m.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Elt {
    c: Vec<Fq>,
}

impl Elt {
    pub fn coords(&self) -> &[Fq] {
        &self.c
    }
}

/// Largest permitted q: the F_q multiplication table has q^2 entries.
const MAX_Q: u64 = 2048;
/// Largest permitted field, as bits of q^m: keeps element values in u128 and
/// the factorization of q^m - 1 a trivial trial division.
const MAX_FIELD_BITS: u32 = 40;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BasisKind {
    Primal,
    Dual,
}

/// Ordered basis of F_{q^m} over F_q. `kind` records whether it was produced
/// as the trace-dual of another basis; taking the dual flips it so that the
/// double dual compares equal to the original.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Basis {
    pub elems: Vec<Elt>,
    pub kind: BasisKind,
}

pub struct FieldCtx {
    p: u64,
    e: usize,
    m: usize,
    q: u64,
    /// Irreducible over F_p defining F_q; length e+1, constant term first, monic.
    g: Vec<u64>,
    /// Irreducible over F_q defining F_{q^m}; length m+1, constant term first, monic.
    h: Vec<Fq>,
    alpha: Elt,
    // F_q arithmetic tables, indexed by packed scalars.
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    /// Row t = coordinates of x^(m+t) mod h, for t in 0..m-1.
    red: Vec<Vec<Fq>>,
    /// Column j = coordinates of (x^j)^q; applying it is the Frobenius map.
    frob: FqMat,
    /// tr(x^j) for j in 0..m.
    trace_row: Vec<Fq>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("m", &self.m)
            .finish()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// --- F_p[y] helpers for finding g (coefficients are plain residues mod p) ---

fn ppoly_mod(mut a: Vec<u64>, b: &[u64], p: u64) -> Vec<u64> {
    // b monic of degree b.len()-1
    let db = b.len() - 1;
    while a.len() > db {
        let lead = *a.last().unwrap();
        if lead != 0 {
            let off = a.len() - 1 - db;
            for i in 0..db {
                a[off + i] = (a[off + i] + p * p - lead * b[i] % p) % p;
            }
        }
        a.pop();
        while a.len() > 1 && *a.last().unwrap() == 0 {
            a.pop();
        }
        if a.len() <= db {
            break;
        }
    }
    a
}

fn ppoly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Monic polynomials of F_p[y] of the given degree, in value order.
fn ppoly_candidates(p: u64, deg: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(deg as u32);
    (0..count).map(move |v| {
        let mut c = Vec::with_capacity(deg + 1);
        let mut v = v;
        for _ in 0..deg {
            c.push(v % p);
            v /= p;
        }
        c.push(1);
        c
    })
}

fn ppoly_irreducible(f: &[u64], p: u64) -> bool {
    // Trial division by every monic polynomial of degree 1..=deg/2.
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for cand in ppoly_candidates(p, d) {
            let r = ppoly_mod(f.to_vec(), &cand, p);
            if ppoly_is_zero(&r) && cand.len() > 1 {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Deterministic tower for the given sizes. g and h are the value-order
    /// smallest monic irreducibles of their degrees.
    pub fn new(p: u64, e: usize, m: usize) -> Result<FieldCtx> {
        Self::check_sizes(p, e, m)?;
        let g = ppoly_candidates(p, e)
            .find(|cand| ppoly_irreducible(cand, p))
            .expect("an irreducible polynomial of every degree exists");
        let mut ctx = Self::from_g(p, e, m, g)?;
        ctx.find_h(None)?;
        ctx.finish()?;
        Ok(ctx)
    }

    /// Rebuild a tower from explicit defining polynomials (deserialization).
    /// Both are validated for irreducibility; alpha is rescanned.
    pub fn with_polynomials(p: u64, e: usize, m: usize, g: Vec<u64>, h: Vec<Vec<u64>>) -> Result<FieldCtx> {
        Self::check_sizes(p, e, m)?;
        if g.len() != e + 1 || *g.last().unwrap() != 1 || g.iter().any(|&c| c >= p) {
            return Err(Error::BadParams("g must be monic of degree e with residues mod p".into()));
        }
        if !ppoly_irreducible(&g, p) {
            return Err(Error::BadParams("g is reducible".into()));
        }
        let mut ctx = Self::from_g(p, e, m, g)?;
        if h.len() != m + 1 {
            return Err(Error::BadParams("h must have degree m".into()));
        }
        let mut hq = Vec::with_capacity(m + 1);
        for digits in &h {
            hq.push(ctx.fq_from_digits(digits)?);
        }
        if hq[m] != Fq(1) {
            return Err(Error::BadParams("h must be monic".into()));
        }
        ctx.find_h(Some(hq))?;
        ctx.finish()?;
        Ok(ctx)
    }

    fn check_sizes(p: u64, e: usize, m: usize) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || m == 0 {
            return Err(Error::BadParams("e and m must be at least 1".into()));
        }
        let bits = (p as f64).log2() * (e * m) as f64;
        if bits > MAX_FIELD_BITS as f64 {
            return Err(Error::TooLarge(format!("q^m exceeds 2^{MAX_FIELD_BITS}")));
        }
        let q = (p as u128).pow(e as u32);
        if q > MAX_Q as u128 {
            return Err(Error::TooLarge(format!("q = p^e exceeds {MAX_Q}")));
        }
        Ok(())
    }

    /// Build the F_q layer (tables) from a validated g.
    fn from_g(p: u64, e: usize, m: usize, g: Vec<u64>) -> Result<FieldCtx> {
        let q = p.pow(e as u32);
        let qa = q as usize;
        let mut add = vec![0u16; qa * qa];
        let mut mul = vec![0u16; qa * qa];
        let mut neg = vec![0u16; qa];
        let mut inv = vec![0u16; qa];

        let digits = |v: u64| -> Vec<u64> {
            let mut d = Vec::with_capacity(e);
            let mut v = v;
            for _ in 0..e {
                d.push(v % p);
                v /= p;
            }
            d
        };
        let pack = |d: &[u64]| -> u64 { d.iter().rev().fold(0, |acc, &x| acc * p + x) };

        for a in 0..q {
            let da = digits(a);
            let nd: Vec<u64> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = pack(&nd) as u16;
            for b in a..q {
                let db = digits(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                let s = pack(&sum) as u16;
                add[(a * q + b) as usize] = s;
                add[(b * q + a) as usize] = s;
                // schoolbook product, then reduce mod g
                let mut prod = vec![0u64; 2 * e - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let rem = ppoly_mod(prod, &g, p);
                let mut rd = vec![0u64; e];
                rd[..rem.len()].copy_from_slice(&rem);
                let r = pack(&rd) as u16;
                mul[(a * q + b) as usize] = r;
                mul[(b * q + a) as usize] = r;
            }
        }
        // inverses by exhaustive pairing (q is small)
        for a in 1..qa {
            for b in 1..qa {
                if mul[a * qa + b] == 1 {
                    inv[a] = b as u16;
                    break;
                }
            }
            if inv[a] == 0 {
                return Err(Error::BadParams("g is reducible: F_q has zero divisors".into()));
            }
        }

        Ok(FieldCtx {
            p,
            e,
            m,
            q,
            g,
            h: Vec::new(),
            alpha: Elt { c: vec![] },
            add,
            mul,
            neg,
            inv,
            red: Vec::new(),
            frob: FqMat::zero(0, 0),
            trace_row: Vec::new(),
        })
    }

    /// Pick h (value-order scan unless given) and install the reduction rows.
    fn find_h(&mut self, given: Option<Vec<Fq>>) -> Result<()> {
        let h = match given {
            Some(h) => {
                if !self.hpoly_irreducible(&h) {
                    return Err(Error::BadParams("h is reducible over F_q".into()));
                }
                h
            }
            None => {
                let m = self.m;
                let q = self.q;
                let mut found = None;
                for v in 0..q.pow(m as u32) {
                    let mut c = Vec::with_capacity(m + 1);
                    let mut v = v;
                    for _ in 0..m {
                        c.push(Fq((v % q) as u16));
                        v /= q;
                    }
                    c.push(Fq(1));
                    if self.hpoly_irreducible(&c) {
                        found = Some(c);
                        break;
                    }
                }
                found.expect("an irreducible polynomial of every degree exists")
            }
        };
        self.h = h;
        // x^(m+t) mod h, iteratively
        let m = self.m;
        let mut cur: Vec<Fq> = (0..m).map(|j| self.fq_neg(self.h[j])).collect(); // x^m
        let mut red = Vec::with_capacity(m.max(1) - 1);
        red.push(cur.clone());
        for _ in 1..m.max(1) - 1 {
            // multiply by x: shift, then fold the overflow through x^m
            let top = cur[m - 1];
            for j in (1..m).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = Fq(0);
            if top != Fq(0) {
                for j in 0..m {
                    cur[j] = self.fq_add(cur[j], self.fq_mul(top, red[0][j]));
                }
            }
            red.push(cur.clone());
        }
        self.red = red;
        Ok(())
    }

    /// Rabin test: h of degree m over F_q is irreducible iff x^(q^m) = x mod h
    /// and gcd(x^(q^(m/l)) - x, h) = 1 for every prime l dividing m.
    fn hpoly_irreducible(&self, h: &[Fq]) -> bool {
        let m = h.len() - 1;
        if m == 1 {
            return true;
        }
        let xq = |k: u32| -> Vec<Fq> {
            // x^(q^k) mod h by square-and-multiply on the exponent
            let exp = (self.q as u128).pow(k);
            self.hpoly_powmod_x(exp, h)
        };
        let xqm = xq(m as u32);
        let x_itself = {
            let mut v = vec![Fq(0); m.max(2)];
            v[1] = Fq(1);
            v.truncate(m);
            v
        };
        if self.hpoly_trim(&xqm) != self.hpoly_trim(&x_itself) {
            return false;
        }
        let mut mm = m;
        let mut primes = Vec::new();
        let mut dd = 2;
        while dd * dd <= mm {
            if mm % dd == 0 {
                primes.push(dd);
                while mm % dd == 0 {
                    mm /= dd;
                }
            }
            dd += 1;
        }
        if mm > 1 {
            primes.push(mm);
        }
        for l in primes {
            let mut diff = xq((m / l) as u32);
            diff[1] = self.fq_sub(diff[1], Fq(1));
            if !self.hpoly_gcd_is_one(&diff, h) {
                return false;
            }
        }
        true
    }

    fn hpoly_trim<'a>(&self, a: &'a [Fq]) -> &'a [Fq] {
        let mut n = a.len();
        while n > 0 && a[n - 1] == Fq(0) {
            n -= 1;
        }
        &a[..n]
    }

    /// x^exp mod h, coefficients length deg(h).
    fn hpoly_powmod_x(&self, mut exp: u128, h: &[Fq]) -> Vec<Fq> {
        let m = h.len() - 1;
        let mut base = vec![Fq(0); m];
        if m == 1 {
            base[0] = self.fq_neg(h[0]);
        } else {
            base[1] = Fq(1);
        }
        let mut acc = vec![Fq(0); m];
        acc[0] = Fq(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.hpoly_mulmod(&acc, &base, h);
            }
            base = self.hpoly_mulmod(&base, &base, h);
            exp >>= 1;
        }
        acc
    }

    fn hpoly_mulmod(&self, a: &[Fq], b: &[Fq], h: &[Fq]) -> Vec<Fq> {
        let m = h.len() - 1;
        let mut prod = vec![Fq(0); 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == Fq(0) {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = self.fq_add(prod[i + j], self.fq_mul(x, y));
            }
        }
        for t in (m..2 * m - 1).rev() {
            let c = prod[t];
            if c == Fq(0) {
                continue;
            }
            prod[t] = Fq(0);
            for j in 0..m {
                let sub = self.fq_mul(c, h[j]);
                prod[t - m + j] = self.fq_sub(prod[t - m + j], sub);
            }
        }
        prod.truncate(m);
        prod
    }

    fn hpoly_gcd_is_one(&self, a: &[Fq], b: &[Fq]) -> bool {
        let mut a = self.hpoly_trim(a).to_vec();
        let mut b = self.hpoly_trim(b).to_vec();
        while !b.is_empty() {
            // a mod b
            let db = b.len() - 1;
            let lead_inv = Fq(self.inv[b[db].0 as usize]);
            while a.len() > db {
                let lead = *a.last().unwrap();
                if lead != Fq(0) {
                    let f = self.fq_mul(lead, lead_inv);
                    let off = a.len() - 1 - db;
                    for i in 0..=db {
                        let sub = self.fq_mul(f, b[i]);
                        a[off + i] = self.fq_sub(a[off + i], sub);
                    }
                }
                while !a.is_empty() && *a.last().unwrap() == Fq(0) {
                    a.pop();
                }
            }
            std::mem::swap(&mut a, &mut b);
        }
        a.len() == 1
    }

    /// Finish construction: Frobenius matrix, trace row, alpha.
    fn finish(&mut self) -> Result<()> {
        let m = self.m;
        let mut frob = FqMat::zero(m, m);
        for j in 0..m {
            let xj = self.poly_basis_elem(j);
            let img = self.pow(&xj, self.q as u128);
            for i in 0..m {
                frob.set(i, j, img.c[i]);
            }
        }
        self.frob = frob;
        let mut trace_row = Vec::with_capacity(m);
        for j in 0..m {
            let mut acc = self.poly_basis_elem(j);
            let mut sum = acc.clone();
            for _ in 1..m {
                acc = self.frobenius(&acc, 1);
                sum = self.add(&sum, &acc);
            }
            // the trace lies in F_q: constant coordinate only
            debug_assert!(sum.c[1..].iter().all(|&c| c == Fq(0)));
            trace_row.push(sum.c[0]);
        }
        self.trace_row = trace_row;

        // alpha: smallest element of full multiplicative order, value order
        let order = (self.q as u128).pow(self.m as u32) - 1;
        let mut primes = Vec::new();
        let mut n = order;
        let mut d = 2u128;
        while d * d <= n {
            if n % d == 0 {
                primes.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        let mut alpha = None;
        for v in 1..=order {
            let cand = self.elt_from_value(v);
            if primes.iter().all(|&l| !self.is_one(&self.pow(&cand, order / l))) {
                alpha = Some(cand);
                break;
            }
        }
        self.alpha = alpha.expect("the multiplicative group is cyclic");
        Ok(())
    }

    // --- accessors ---

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn g_coeffs(&self) -> &[u64] {
        &self.g
    }
    pub fn h_coeffs(&self) -> &[Fq] {
        &self.h
    }
    pub fn alpha(&self) -> Elt {
        self.alpha.clone()
    }
    /// Number of elements of F_{q^m}.
    pub fn field_size(&self) -> u128 {
        (self.q as u128).pow(self.m as u32)
    }

    // --- F_q scalar arithmetic ---

    #[inline]
    pub fn fq_add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }
    #[inline]
    pub fn fq_sub(&self, a: Fq, b: Fq) -> Fq {
        self.fq_add(a, self.fq_neg(b))
    }
    #[inline]
    pub fn fq_neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }
    #[inline]
    pub fn fq_mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }
    pub fn fq_inv(&self, a: Fq) -> Result<Fq> {
        if a == Fq(0) {
            return Err(Error::ZeroDivision);
        }
        Ok(Fq(self.inv[a.0 as usize]))
    }
    /// Packed scalar from base-p digits, constant digit first.
    pub fn fq_from_digits(&self, d: &[u64]) -> Result<Fq> {
        if d.len() != self.e || d.iter().any(|&x| x >= self.p) {
            return Err(Error::BadParams(format!("scalar digits must be {} residues mod {}", self.e, self.p)));
        }
        Ok(Fq(d.iter().rev().fold(0u64, |acc, &x| acc * self.p + x) as u16))
    }
    pub fn fq_digits(&self, a: Fq) -> Vec<u64> {
        let mut v = a.0 as u64;
        let mut d = Vec::with_capacity(self.e);
        for _ in 0..self.e {
            d.push(v % self.p);
            v /= self.p;
        }
        d
    }

    // --- F_{q^m} arithmetic ---

    pub fn zero(&self) -> Elt {
        Elt { c: vec![Fq(0); self.m] }
    }
    pub fn one(&self) -> Elt {
        let mut z = self.zero();
        z.c[0] = Fq(1);
        z
    }
    pub fn is_zero(&self, a: &Elt) -> bool {
        a.c.iter().all(|&x| x == Fq(0))
    }
    pub fn is_one(&self, a: &Elt) -> bool {
        a.c[0] == Fq(1) && a.c[1..].iter().all(|&x| x == Fq(0))
    }
    /// j-th polynomial basis element x^j.
    pub fn poly_basis_elem(&self, j: usize) -> Elt {
        let mut z = self.zero();
        z.c[j] = Fq(1);
        z
    }
    pub fn poly_basis(&self) -> Basis {
        Basis {
            elems: (0..self.m).map(|j| self.poly_basis_elem(j)).collect(),
            kind: BasisKind::Primal,
        }
    }
    pub fn elt_from_coords(&self, c: Vec<Fq>) -> Result<Elt> {
        if c.len() != self.m || c.iter().any(|&x| x.0 as u64 >= self.q) {
            return Err(Error::BadParams("coordinate vector has wrong length or range".into()));
        }
        Ok(Elt { c })
    }
    /// The element whose coordinate vector is the base-q digits of v
    /// (constant coordinate = least significant digit).
    pub fn elt_from_value(&self, v: u128) -> Elt {
        debug_assert!(v < self.field_size());
        let mut c = Vec::with_capacity(self.m);
        let mut v = v;
        for _ in 0..self.m {
            c.push(Fq((v % self.q as u128) as u16));
            v /= self.q as u128;
        }
        Elt { c }
    }
    pub fn value(&self, a: &Elt) -> u128 {
        a.c.iter().rev().fold(0u128, |acc, &x| acc * self.q as u128 + x.0 as u128)
    }
    /// Embed an F_q scalar as a constant.
    pub fn embed_fq(&self, a: Fq) -> Elt {
        let mut z = self.zero();
        z.c[0] = a;
        z
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        Elt {
            c: a.c.iter().zip(&b.c).map(|(&x, &y)| self.fq_add(x, y)).collect(),
        }
    }
    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        Elt {
            c: a.c.iter().zip(&b.c).map(|(&x, &y)| self.fq_sub(x, y)).collect(),
        }
    }
    pub fn neg(&self, a: &Elt) -> Elt {
        Elt { c: a.c.iter().map(|&x| self.fq_neg(x)).collect() }
    }
    pub fn smul(&self, a: &Elt, s: Fq) -> Elt {
        Elt { c: a.c.iter().map(|&x| self.fq_mul(x, s)).collect() }
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let m = self.m;
        if m == 1 {
            return Elt { c: vec![self.fq_mul(a.c[0], b.c[0])] };
        }
        let mut prod = vec![Fq(0); 2 * m - 1];
        for (i, &x) in a.c.iter().enumerate() {
            if x == Fq(0) {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                prod[i + j] = self.fq_add(prod[i + j], self.fq_mul(x, y));
            }
        }
        let mut out: Vec<Fq> = prod[..m].to_vec();
        for t in 0..m - 1 {
            let c = prod[m + t];
            if c == Fq(0) {
                continue;
            }
            let row = &self.red[t];
            for j in 0..m {
                out[j] = self.fq_add(out[j], self.fq_mul(c, row[j]));
            }
        }
        Elt { c: out }
    }

    pub fn pow(&self, a: &Elt, mut exp: u128) -> Elt {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv_elt(&self, a: &Elt) -> Result<Elt> {
        if self.is_zero(a) {
            return Err(Error::ZeroDivision);
        }
        Ok(self.pow(a, self.field_size() - 2))
    }
    pub fn div(&self, a: &Elt, b: &Elt) -> Result<Elt> {
        Ok(self.mul(a, &self.inv_elt(b)?))
    }

    /// k-fold Frobenius x -> x^(q^k), as a linear map on coordinates.
    pub fn frobenius(&self, a: &Elt, k: usize) -> Elt {
        let k = k % self.m.max(1);
        let mut c = a.c.clone();
        for _ in 0..k {
            c = self.frob.apply(self, &c);
        }
        Elt { c }
    }

    /// Trace to F_q: tr(a) = a + a^q + .. + a^(q^(m-1)). Linear over F_q.
    pub fn trace(&self, a: &Elt) -> Fq {
        let mut t = Fq(0);
        for (j, &x) in a.c.iter().enumerate() {
            t = self.fq_add(t, self.fq_mul(x, self.trace_row[j]));
        }
        t
    }

    // --- bases ---

    /// Validate independence and wrap as a primal basis.
    pub fn make_basis(&self, elems: Vec<Elt>) -> Result<Basis> {
        if elems.len() != self.m || self.rank_q(&elems) != self.m {
            return Err(Error::BadBasis("need m independent elements".into()));
        }
        Ok(Basis { elems, kind: BasisKind::Primal })
    }

    /// Trace-dual basis: the unique basis with tr(dual_i * b_j) = [i == j].
    /// Computed by inverting the Gram matrix tr(b_i * b_j) over F_q.
    pub fn dual_basis(&self, basis: &Basis) -> Result<Basis> {
        let m = self.m;
        if basis.elems.len() != m {
            return Err(Error::BadBasis("basis has wrong length".into()));
        }
        let mut gram = FqMat::zero(m, m);
        for i in 0..m {
            for j in i..m {
                let t = self.trace(&self.mul(&basis.elems[i], &basis.elems[j]));
                gram.set(i, j, t);
                gram.set(j, i, t);
            }
        }
        let ginv = gram.inverse(self).ok_or_else(|| Error::BadBasis("elements are dependent".into()))?;
        let mut elems = Vec::with_capacity(m);
        for i in 0..m {
            let mut acc = self.zero();
            for j in 0..m {
                acc = self.add(&acc, &self.smul(&basis.elems[j], ginv.get(i, j)));
            }
            elems.push(acc);
        }
        let kind = match basis.kind {
            BasisKind::Primal => BasisKind::Dual,
            BasisKind::Dual => BasisKind::Primal,
        };
        Ok(Basis { elems, kind })
    }

    /// Coordinates of x in an arbitrary basis.
    pub fn coords_in_basis(&self, x: &Elt, basis: &Basis) -> Result<Vec<Fq>> {
        let m = self.m;
        let mut mat = FqMat::zero(m, m + 1);
        for (j, b) in basis.elems.iter().enumerate() {
            for i in 0..m {
                mat.set(i, j, b.c[i]);
            }
        }
        for i in 0..m {
            mat.set(i, m, x.c[i]);
        }
        let sol = mat.solve_single(self).ok_or_else(|| Error::BadBasis("elements are dependent".into()))?;
        Ok(sol)
    }

    /// Multiplication matrix of u in basis S: column j holds the S-coordinates
    /// of u * S_j, so applying the matrix to a coordinate vector multiplies by u.
    /// Its (i, j) entry is tr(dual_i * S_j * u); transposing it gives the
    /// multiplication matrix in the dual basis.
    pub fn mult_matrix(&self, u: &Elt, s: &Basis) -> Result<FqMat> {
        let m = self.m;
        let mut p = FqMat::zero(m, m);
        for (j, b) in s.elems.iter().enumerate() {
            for i in 0..m {
                p.set(i, j, b.c[i]);
            }
        }
        let pinv = p.inverse(self).ok_or_else(|| Error::BadBasis("elements are dependent".into()))?;
        let mut out = FqMat::zero(m, m);
        for (j, b) in s.elems.iter().enumerate() {
            let prod = self.mul(u, b);
            let col = pinv.apply(self, &prod.c);
            for i in 0..m {
                out.set(i, j, col[i]);
            }
        }
        Ok(out)
    }

    /// Positions of the elements of `b` inside `s` (exact element match).
    pub fn basis_positions(&self, b: &[Elt], s: &Basis) -> Result<Vec<usize>> {
        b.iter()
            .map(|x| {
                s.elems
                    .iter()
                    .position(|y| y == x)
                    .ok_or_else(|| Error::BadBasis("not a sub-basis: element missing from S".into()))
            })
            .collect()
    }

    /// Rows of the multiplication matrix [u]_S indexed by the sub-basis B.
    pub fn row_block(&self, u: &Elt, b: &[Elt], s: &Basis) -> Result<FqMat> {
        let full = self.mult_matrix(u, s)?;
        let idx = self.basis_positions(b, s)?;
        Ok(full.select_rows(&idx))
    }

    /// Columns of the multiplication matrix [u]_S indexed by the sub-basis B.
    pub fn col_block(&self, u: &Elt, s: &Basis, b: &[Elt]) -> Result<FqMat> {
        let full = self.mult_matrix(u, s)?;
        let idx = self.basis_positions(b, s)?;
        Ok(full.select_cols(&idx))
    }

    /// Rank over F_q of a set of elements of F_{q^m}.
    pub fn rank_q(&self, elems: &[Elt]) -> usize {
        let mut mat = FqMat::zero(elems.len(), self.m);
        for (i, x) in elems.iter().enumerate() {
            for j in 0..self.m {
                mat.set(i, j, x.c[j]);
            }
        }
        mat.rank(self)
    }

    /// Greedily extend an independent set to a full basis using polynomial
    /// basis candidates in order; returns only the appended part.
    pub fn complete_basis(&self, partial: &[Elt]) -> Result<Vec<Elt>> {
        let mut all: Vec<Elt> = partial.to_vec();
        let mut rank = self.rank_q(&all);
        if rank != partial.len() {
            return Err(Error::BadBasis("partial set is dependent".into()));
        }
        let mut added = Vec::new();
        for j in 0..self.m {
            if rank == self.m {
                break;
            }
            let cand = self.poly_basis_elem(j);
            all.push(cand.clone());
            let r2 = self.rank_q(&all);
            if r2 > rank {
                rank = r2;
                added.push(cand);
            } else {
                all.pop();
            }
        }
        debug_assert_eq!(rank, self.m);
        Ok(added)
    }
}

/// Linearized polynomial sum(coeffs[i] * X^(q^i)); an F_q-linear map of F_{q^m}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinPoly {
    pub coeffs: Vec<Elt>,
}

impl LinPoly {
    pub fn q_degree(&self) -> usize {
        self.coeffs.len() - 1
    }
    pub fn eval(&self, ctx: &FieldCtx, x: &Elt) -> Elt {
        let mut acc = ctx.zero();
        let mut xp = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = ctx.frobenius(&xp, 1);
            }
            acc = ctx.add(&acc, &ctx.mul(c, &xp));
        }
        acc
    }
}
