//! Finite fields of small order, table driven.
//!
//! An element is stored as the integer encoding of its coefficient vector
//! over the prime field: `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`, where `c_i`
//! is the coefficient of `a^i` and `a` is the residue class of the modulus
//! variable. The same representation backs the larger fields built by
//! [`Field::extension`] for point counting.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Largest field order accepted for curve models.
pub const MAX_BASE_ORDER: u32 = 16;
/// Largest field order built internally (degree-4 extensions of F_16).
const MAX_TABLE_ORDER: u32 = 1 << 16;
/// Fields up to this order get a full addition table.
const ADD_TABLE_LIMIT: u32 = 256;

/// An element of a [`Field`], as its integer encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus over F_p, little-endian, length n + 1.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    /// log of `a` with respect to the table generator; `None` for prime fields.
    alpha_log: Option<u32>,
    alpha_order: Option<u32>,
    /// Canonical square roots (odd characteristic) or unique roots (char 2).
    sqrt: Vec<Option<u32>>,
    extensions: [OnceLock<Extension>; 4],
}

/// A degree-k extension together with the embedding of the base field.
#[derive(Clone)]
pub struct Extension {
    pub field: Field,
    /// `embed[e.0]` is the image of `e` in `field`.
    pub embed: Vec<Fe>,
}

/// A finite field F_q with q = p^n, cheap to clone and share.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec_string())
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.n == other.0.n && self.0.modulus == other.0.modulus
    }
}

impl Eq for Field {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Default moduli: a^2+a+1 (q=4), a^3+a+1 (q=8), a^4+a+1 (q=16), a^2-a-1 (q=9).
fn default_modulus(p: u32, n: u32) -> Option<Vec<u32>> {
    match (p, n) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        (3, 2) => Some(vec![2, 2, 1]),
        _ => None,
    }
}

// --- digit-vector arithmetic over F_p, used only while building tables ---

fn digits(mut e: u32, p: u32, n: u32) -> Vec<u32> {
    (0..n)
        .map(|_| {
            let d = e % p;
            e /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Product of two residues modulo a monic modulus of degree n.
fn mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (n..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate().take(n) {
            let idx = k - n + i;
            prod[idx] = (prod[idx] + (p - c) * m) % p;
        }
        prod[k] = 0;
    }
    prod.truncate(n);
    prod
}

fn pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let mut acc = vec![0u32; n];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, modulus, p);
        }
        b = mul_mod(&b, &b, modulus, p);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Multiplicative order of `x` modulo `modulus` equals p^n - 1.
fn x_is_primitive(modulus: &[u32], p: u32) -> bool {
    let n = modulus.len() - 1;
    let order = (p as u64).pow(n as u32) - 1;
    let mut x = vec![0u32; n];
    if n == 1 {
        x[0] = (p - modulus[0]) % p;
    } else {
        x[1] = 1;
    }
    let mut one = vec![0u32; n];
    one[0] = 1;
    if x.iter().all(|&c| c == 0) || pow_mod(&x, order, modulus, p) != one {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|r| pow_mod(&x, order / r, modulus, p) != one)
}

/// Trial division by every monic polynomial of degree 1..=n/2 over F_p.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let n = modulus.len() - 1;
    if n <= 1 {
        return true;
    }
    for d in 1..=n / 2 {
        for low in 0..p.pow(d as u32) {
            let mut divisor = digits(low, p, d as u32);
            divisor.push(1);
            if poly_rem_fp(modulus, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_fp(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    // b is monic
    while r.len() > db {
        let c = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * bc) % p;
        }
        r.pop();
    }
    r
}

fn first_primitive_modulus(p: u32, n: u32) -> Vec<u32> {
    for low in 0..p.pow(n) {
        let mut m = digits(low, p, n);
        m.push(1);
        if x_is_primitive(&m, p) {
            return m;
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

impl Field {
    /// Builds F_{p^n}. `modulus` is little-endian over F_p and monic of degree n;
    /// the built-in table is used when it is omitted.
    pub fn new(p: u32, n: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p) || n == 0 {
            return Err(Error::Field(format!(
                "invalid characteristic/degree {p}^{n}"
            )));
        }
        let q = p.checked_pow(n).filter(|&q| q <= MAX_BASE_ORDER);
        if q.is_none() {
            return Err(Error::Field(format!(
                "field order {p}^{n} out of supported range"
            )));
        }
        let modulus = match modulus {
            Some(m) => m,
            None => default_modulus(p, n).expect("table covers all q <= 16"),
        };
        Self::build(p, n, modulus)
    }

    /// Builds F_q from its order using the default modulus.
    pub fn with_order(q: u32) -> Result<Field> {
        let (p, n) =
            prime_power(q).ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        Field::new(p, n, None)
    }

    fn build(p: u32, n: u32, modulus: Vec<u32>) -> Result<Field> {
        let q = p.pow(n);
        if q > MAX_TABLE_ORDER {
            return Err(Error::Field(format!("field order {q} too large")));
        }
        if n > 1 {
            if modulus.len() != n as usize + 1 || modulus[n as usize] != 1 {
                return Err(Error::Field(
                    "modulus must be monic of the extension degree".into(),
                ));
            }
            if modulus.iter().any(|&c| c >= p) {
                return Err(Error::Field("modulus coefficient out of range".into()));
            }
            if !is_irreducible(&modulus, p) {
                return Err(Error::Field("modulus is reducible".into()));
            }
        }
        let modulus = if n == 1 { vec![0, 1] } else { modulus };

        // exp/log tables over the first primitive element in encoding order
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; q as usize];
        let mut found = false;
        for g in 1..q {
            let gd = digits(g, p, n);
            let mut cur = digits(1, p, n);
            let mut ok = true;
            for k in 0..order {
                let e = undigits(&cur, p);
                if k > 0 && e == 1 {
                    ok = false;
                    break;
                }
                exp[k as usize] = e;
                cur = mul_mod(&cur, &gd, &modulus, p);
            }
            if ok {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Field(
                "no primitive element (modulus reducible?)".into(),
            ));
        }
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }

        let neg: Vec<u32> = (0..q)
            .map(|e| {
                undigits(
                    &digits(e, p, n)
                        .iter()
                        .map(|&c| (p - c) % p)
                        .collect::<Vec<_>>(),
                    p,
                )
            })
            .collect();
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, n);
                for b in 0..q {
                    let db = digits(b, p, n);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s, p);
                }
            }
            t
        });

        let (alpha_log, alpha_order) = if n > 1 {
            let l = log[p as usize];
            let ord = order / gcd(order, l);
            (Some(l), Some(ord))
        } else {
            (None, None)
        };

        let mut inner = Inner {
            p,
            n,
            q,
            modulus,
            exp,
            log,
            neg,
            add,
            alpha_log,
            alpha_order,
            sqrt: Vec::new(),
            extensions: Default::default(),
        };
        inner.sqrt = if q <= ADD_TABLE_LIMIT {
            sqrt_table(&inner)
        } else {
            Vec::new()
        };
        Ok(Field(Arc::new(inner)))
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.n
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus over F_p, little-endian. For prime fields this is `[0, 1]`.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    /// The residue class `a` of the modulus variable, for proper extensions.
    pub fn alpha(&self) -> Option<Fe> {
        (self.0.n > 1).then_some(Fe(self.0.p))
    }

    /// Multiplicative order of `a`.
    pub fn alpha_order(&self) -> Option<u32> {
        self.0.alpha_order
    }

    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.0.p as i64) as u32)
    }

    /// All elements in encoding order, starting with 0.
    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.0.q).map(Fe)
    }

    /// Whether `e` lies in the prime subfield.
    pub fn is_prime_subfield(&self, e: Fe) -> bool {
        e.0 < self.0.p
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        let i = &*self.0;
        if let Some(t) = &i.add {
            return Fe(t[(a.0 * i.q + b.0) as usize]);
        }
        if i.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
        while x > 0 || y > 0 {
            out += ((x % i.p + y % i.p) % i.p) * place;
            x /= i.p;
            y /= i.p;
            place *= i.p;
        }
        Fe(out)
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let i = &*self.0;
        let s = i.log[a.0 as usize] + i.log[b.0 as usize];
        let ord = i.q - 1;
        Fe(i.exp[(if s >= ord { s - ord } else { s }) as usize])
    }

    pub fn inv(&self, a: Fe) -> Result<Fe> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let i = &*self.0;
        let l = i.log[a.0 as usize];
        Ok(Fe(i.exp[((i.q - 1 - l) % (i.q - 1)) as usize]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for any integer exponent; negative exponents require `a != 0`.
    pub fn pow(&self, a: Fe, e: i64) -> Result<Fe> {
        if e < 0 {
            return self.pow(self.inv(a)?, -e);
        }
        let (mut acc, mut base, mut e) = (Fe::ONE, a, e as u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative element `g^k` for the internal table generator.
    pub(crate) fn exp_table(&self, k: u32) -> Fe {
        Fe(self.0.exp[(k % (self.0.q - 1)) as usize])
    }

    /// Discrete log with respect to `a`, when `e` is a power of `a`.
    pub fn log_alpha(&self, e: Fe) -> Option<u32> {
        let (al, ord) = (self.0.alpha_log?, self.0.alpha_order?);
        if e.is_zero() {
            return None;
        }
        let l = self.0.log[e.0 as usize];
        // solve k * al = l mod (q-1)
        (0..ord).find(|&k| (k as u64 * al as u64) % (self.0.q as u64 - 1) == l as u64)
    }

    /// Quadratic character: 0, 1 (non-zero square) or -1. Odd characteristic only.
    pub fn legendre(&self, a: Fe) -> i32 {
        if a.is_zero() {
            0
        } else if self.0.p == 2 || self.0.log[a.0 as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Absolute trace to F_2 of a characteristic-2 element.
    pub fn trace_f2(&self, a: Fe) -> u32 {
        let mut t = a;
        let mut acc = a;
        for _ in 1..self.0.n {
            t = self.mul(t, t);
            acc = self.add(acc, t);
        }
        acc.0
    }

    /// Canonical square root: in odd characteristic the root with the smaller
    /// encoding, `None` for non-squares; in characteristic 2 the unique root.
    pub fn sqrt(&self, a: Fe) -> Option<Fe> {
        if let Some(r) = self.0.sqrt.get(a.0 as usize) {
            return r.map(Fe);
        }
        // large fields: via the log table
        if a.is_zero() {
            return Some(Fe::ZERO);
        }
        let l = self.0.log[a.0 as usize];
        let ord = self.0.q - 1;
        if self.0.p == 2 {
            // squaring permutes the logs; (q-1) is odd
            let half = (ord + 1) / 2;
            return Some(self.exp_table((l as u64 * half as u64 % ord as u64) as u32));
        }
        if l % 2 == 1 {
            return None;
        }
        let r1 = self.exp_table(l / 2);
        let r2 = self.neg(r1);
        Some(r1.min(r2))
    }

    /// Smallest solution `y` of `y^2 + c y = d` in characteristic 2.
    pub fn artin_schreier_solve(&self, c: Fe, d: Fe) -> Result<Option<Fe>> {
        if self.0.p != 2 {
            return Err(Error::Field(
                "Artin-Schreier equation needs characteristic 2".into(),
            ));
        }
        if c.is_zero() {
            return Ok(self.sqrt(d));
        }
        Ok(self
            .elements()
            .find(|&y| self.add(self.mul(y, y), self.mul(c, y)) == d))
    }

    /// Both solutions of `y^2 + b y = c` in increasing order (one if double, none if none).
    pub fn solve_quadratic(&self, b: Fe, c: Fe) -> Vec<Fe> {
        if self.0.p == 2 {
            if b.is_zero() {
                return self.sqrt(c).into_iter().collect();
            }
            // substitute y = b z: z^2 + z = c / b^2
            let t = self.div(c, self.mul(b, b)).unwrap();
            if self.trace_f2(t) != 0 {
                return Vec::new();
            }
            let z = self
                .elements()
                .find(|&z| self.add(self.mul(z, z), z) == t)
                .expect("trace-zero element is an Artin-Schreier image");
            let y1 = self.mul(b, z);
            let y2 = self.add(y1, b);
            let mut v = vec![y1, y2];
            v.sort();
            return v;
        }
        // y = (-b +- sqrt(b^2 + 4c)) / 2
        let four = self.from_int(4);
        let disc = self.add(self.mul(b, b), self.mul(four, c));
        let Some(s) = self.sqrt(disc) else {
            return Vec::new();
        };
        let half = self.inv(self.from_int(2)).unwrap();
        let nb = self.neg(b);
        let y1 = self.mul(self.add(nb, s), half);
        let y2 = self.mul(self.sub(nb, s), half);
        let mut v = vec![y1, y2];
        v.sort();
        v.dedup();
        v
    }

    /// Number of `y` with `y^2 + b y = c`.
    #[inline]
    pub fn count_quadratic(&self, b: Fe, c: Fe) -> u32 {
        if self.0.p == 2 {
            if b.is_zero() {
                return 1;
            }
            let t = self.mul(c, self.inv(self.mul(b, b)).unwrap());
            if self.trace_f2(t) == 0 {
                2
            } else {
                0
            }
        } else {
            let disc = self.add(self.mul(b, b), self.mul(self.from_int(4), c));
            (1 + self.legendre(disc)) as u32
        }
    }

    /// The degree-k extension (k in 1..=4) with its embedding of this field.
    pub fn extension(&self, k: u32) -> Result<Extension> {
        if !(1..=4).contains(&k) {
            return Err(Error::Field(format!("extension degree {k} not supported")));
        }
        if k == 1 {
            return Ok(Extension {
                field: self.clone(),
                embed: self.elements().collect(),
            });
        }
        let slot = &self.0.extensions[k as usize - 1];
        if let Some(e) = slot.get() {
            return Ok(e.clone());
        }
        let (p, n) = (self.0.p, self.0.n);
        let big = Field::build(p, n * k, first_primitive_modulus(p, n * k))?;
        let embed: Vec<Fe> = if n == 1 {
            self.elements().collect()
        } else {
            // a root of our modulus inside the big field
            let root = big
                .elements()
                .find(|&b| {
                    let mut acc = Fe::ZERO;
                    for &c in self.0.modulus.iter().rev() {
                        acc = big.add(big.mul(acc, b), Fe(c));
                    }
                    acc.is_zero()
                })
                .expect("extension contains the base field");
            self.elements()
                .map(|e| {
                    let mut acc = Fe::ZERO;
                    for &c in digits(e.0, p, n).iter().rev() {
                        acc = big.add(big.mul(acc, root), Fe(c));
                    }
                    acc
                })
                .collect()
        };
        let ext = Extension { field: big, embed };
        Ok(slot.get_or_init(|| ext).clone())
    }

    // --- text format ---

    /// Prints an element: integers for the prime subfield, `a^k` for powers
    /// of the generator, otherwise a sum of generator powers.
    pub fn format(&self, e: Fe) -> String {
        if self.is_prime_subfield(e) {
            return e.0.to_string();
        }
        if let Some(k) = self.log_alpha(e) {
            return if k == 1 { "a".into() } else { format!("a^{k}") };
        }
        let d = digits(e.0, self.0.p, self.0.n);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".into(),
                _ => format!("a^{i}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        terms.join("+")
    }

    /// Parses sums/differences of terms `c`, `a`, `a^k`, `c*a^k`, `-a^k`.
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut acc = Fe::ZERO;
        for (sign, term) in split_signed_terms(&s)? {
            let mut v = Fe::ONE;
            for factor in term.split('*') {
                v = self.mul(v, self.parse_factor(factor)?);
            }
            acc = if sign {
                self.sub(acc, v)
            } else {
                self.add(acc, v)
            };
        }
        Ok(acc)
    }

    fn parse_factor(&self, f: &str) -> Result<Fe> {
        let bad = || Error::Parse(format!("bad field element factor '{f}'"));
        if let Some(rest) = f.strip_prefix('a') {
            let alpha = self
                .alpha()
                .ok_or_else(|| Error::Parse("prime field has no generator 'a'".into()))?;
            let k: i64 = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?
            };
            return self.pow(alpha, k);
        }
        let v: i64 = f.parse().map_err(|_| bad())?;
        Ok(self.from_int(v))
    }

    /// `q=16` for default moduli, `q=16;mod=a^4+a+1` otherwise.
    pub fn spec_string(&self) -> String {
        let q = self.0.q;
        if self.0.n == 1
            || default_modulus(self.0.p, self.0.n).as_deref() == Some(&self.0.modulus[..])
        {
            return format!("q={q}");
        }
        format!("q={q};mod={}", self.modulus_string())
    }

    /// The modulus in the element grammar, e.g. `a^4+a+1`; `-` for prime fields.
    pub fn modulus_string(&self) -> String {
        if self.0.n == 1 {
            return "-".into();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.0.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "a".into(),
                _ => format!("a^{i}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        terms.join("+")
    }

    /// Parses `q=<order>` optionally followed by `;mod=<poly in a>`.
    pub fn parse_spec(s: &str) -> Result<Field> {
        let mut q = None;
        let mut modulus = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad field spec part '{part}'")))?;
            match k.trim() {
                "q" => {
                    q = Some(
                        v.trim()
                            .parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad order '{v}'")))?,
                    )
                }
                "mod" => modulus = Some(v.trim().to_string()),
                other => return Err(Error::Parse(format!("unknown field spec key '{other}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::Parse("field spec needs q=".into()))?;
        Self::from_order_and_modulus(q, modulus.as_deref())
    }

    /// Builds F_q with an optional modulus written in the element grammar.
    pub fn from_order_and_modulus(q: u32, modulus: Option<&str>) -> Result<Field> {
        let (p, n) =
            prime_power(q).ok_or_else(|| Error::Field(format!("{q} is not a prime power")))?;
        let m = match modulus {
            None | Some("-") => None,
            Some(text) => Some(parse_fp_poly(text, p)?),
        };
        Field::new(p, n, m)
    }
}

/// Coefficients of a polynomial in `a` over F_p, little-endian.
fn parse_fp_poly(text: &str, p: u32) -> Result<Vec<u32>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut coeffs: Vec<i64> = Vec::new();
    for (neg, term) in split_signed_terms(&s)? {
        let bad = || Error::Parse(format!("bad modulus term '{term}'"));
        let (c, mono) = match term.split_once('*') {
            Some((c, m)) => (c.parse::<i64>().map_err(|_| bad())?, m),
            None if term.starts_with('a') => (1, term),
            None => (term.parse::<i64>().map_err(|_| bad())?, ""),
        };
        let k = if mono.is_empty() {
            0
        } else if mono == "a" {
            1
        } else {
            mono.strip_prefix("a^")
                .ok_or_else(bad)?
                .parse::<usize>()
                .map_err(|_| bad())?
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, 0);
        }
        coeffs[k] += if neg { -c } else { c };
    }
    let mut out: Vec<u32> = coeffs
        .iter()
        .map(|c| c.rem_euclid(p as i64) as u32)
        .collect();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    Ok(out)
}

/// Splits `x+y-z` into `(negated, term)` pairs, respecting `^` exponents.
pub(crate) fn split_signed_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut start = 0;
    let mut neg = false;
    let mut i = 0;
    if bytes.first() == Some(&b'-') {
        neg = true;
        start = 1;
        i = 1;
    } else if bytes.first() == Some(&b'+') {
        start = 1;
        i = 1;
    }
    while i < bytes.len() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && i > start && bytes[i - 1] != b'^' {
            out.push((neg, &s[start..i]));
            neg = b == b'-';
            start = i + 1;
        }
        i += 1;
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("dangling sign in '{s}'")));
    }
    out.push((neg, &s[start..]));
    Ok(out)
}

fn sqrt_table(inner: &Inner) -> Vec<Option<u32>> {
    let q = inner.q;
    let mut t = vec![None; q as usize];
    let mul = |a: u32, b: u32| -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = (inner.log[a as usize] + inner.log[b as usize]) % (q - 1);
        inner.exp[s as usize]
    };
    for r in 0..q {
        let sq = mul(r, r) as usize;
        if t[sq].is_none() {
            t[sq] = Some(r);
        }
    }
    t
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `(p, n)` with q = p^n, if q is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut n = 0;
    let mut m = q;
    while m % p == 0 {
        m /= p;
        n += 1;
    }
    (m == 1).then_some((p, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_orders() -> Vec<u32> {
        vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16]
    }

    #[test]
    fn default_moduli_are_the_expected_ones() {
        let f16 = Field::with_order(16).unwrap();
        let a = f16.alpha().unwrap();
        // a^4 = a + 1
        assert_eq!(f16.pow(a, 4).unwrap(), f16.add(a, Fe::ONE));
        let f9 = Field::with_order(9).unwrap();
        let a = f9.alpha().unwrap();
        assert_eq!(f9.mul(a, a), f9.add(a, Fe::ONE));
        let f5 = Field::with_order(5).unwrap();
        assert_eq!(f5.alpha(), None);
        assert_eq!(f5.modulus_string(), "-");
    }

    #[test]
    fn default_generators_are_primitive() {
        for q in [9, 16] {
            let f = Field::with_order(q).unwrap();
            let a = f.alpha().unwrap();
            assert_eq!(f.pow(a, (q - 1) as i64).unwrap(), Fe::ONE);
            for k in 1..q - 1 {
                assert_ne!(f.pow(a, k as i64).unwrap(), Fe::ONE, "q={q} k={k}");
            }
            assert_eq!(f.alpha_order(), Some(q - 1));
        }
    }

    #[test]
    fn small_examples() {
        let f16 = Field::with_order(16).unwrap();
        let a = f16.alpha().unwrap();
        assert_eq!(f16.mul(a, f16.pow(a, 3).unwrap()), f16.add(a, Fe::ONE));
        for q in all_orders() {
            let f = Field::with_order(q).unwrap();
            assert_eq!(f.inv(Fe::ONE).unwrap(), Fe::ONE);
            assert!(f.inv(Fe::ZERO).is_err());
        }
        let f5 = Field::with_order(5).unwrap();
        assert_eq!(f5.pow(Fe(2), 4).unwrap(), Fe::ONE);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Field::with_order(25).is_err());
        assert!(Field::with_order(6).is_err());
        // a^2+1 = (a+1)^2 over F_2
        assert!(Field::new(2, 2, Some(vec![1, 0, 1])).is_err());
        // a^2+1 is irreducible over F_3 but a has order 4
        let f = Field::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        assert_eq!(f.alpha_order(), Some(4));
        assert_eq!(f.spec_string(), "q=9;mod=a^2+1");
    }

    #[test]
    fn enumeration_order() {
        let f2 = Field::with_order(2).unwrap();
        assert_eq!(f2.elements().collect::<Vec<_>>(), vec![Fe(0), Fe(1)]);
        let f9 = Field::with_order(9).unwrap();
        assert_eq!(f9.elements().count(), 9);
        let f16 = Field::with_order(16).unwrap();
        let a = f16.alpha().unwrap();
        let els: Vec<Fe> = f16.elements().collect();
        for k in [6, 9, 12] {
            assert!(els.contains(&f16.pow(a, k).unwrap()));
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in all_orders() {
            let f = Field::with_order(q).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
                assert_eq!(f.add(a, f.neg(a)), Fe::ZERO);
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn square_roots() {
        let f5 = Field::with_order(5).unwrap();
        assert_eq!(f5.sqrt(Fe(4)), Some(Fe(2)));
        assert_eq!(f5.sqrt(Fe(2)), None);
        for q in all_orders() {
            let f = Field::with_order(q).unwrap();
            let mut nonzero_squares = 0;
            for a in f.elements() {
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.mul(r, r), a);
                    if !a.is_zero() {
                        nonzero_squares += 1;
                    }
                }
            }
            if q % 2 == 1 {
                assert_eq!(nonzero_squares, (q - 1) / 2);
            } else {
                assert_eq!(nonzero_squares, q - 1);
            }
        }
    }

    #[test]
    fn artin_schreier() {
        let f2 = Field::with_order(2).unwrap();
        assert_eq!(
            f2.artin_schreier_solve(Fe::ONE, Fe::ZERO).unwrap(),
            Some(Fe::ZERO)
        );
        assert_eq!(f2.artin_schreier_solve(Fe::ONE, Fe::ONE).unwrap(), None);
        let f5 = Field::with_order(5).unwrap();
        assert!(f5.artin_schreier_solve(Fe::ONE, Fe::ZERO).is_err());
        let f16 = Field::with_order(16).unwrap();
        for c in f16.elements().skip(1) {
            for d in f16.elements() {
                match f16.artin_schreier_solve(c, d).unwrap() {
                    Some(y) => {
                        let y2 = f16.add(y, c);
                        assert_eq!(f16.add(f16.mul(y2, y2), f16.mul(c, y2)), d);
                        assert_eq!(f16.count_quadratic(c, d), 2);
                    }
                    None => assert_eq!(f16.count_quadratic(c, d), 0),
                }
            }
        }
    }

    #[test]
    fn element_text_round_trip() {
        for q in all_orders() {
            let f = Field::with_order(q).unwrap();
            for e in f.elements() {
                assert_eq!(f.parse(&f.format(e)).unwrap(), e, "q={q}");
            }
        }
        let f9 = Field::with_order(9).unwrap();
        let a = f9.alpha().unwrap();
        assert_eq!(f9.parse("-a").unwrap(), f9.neg(a));
        assert_eq!(
            f9.parse("a^3+1").unwrap(),
            f9.add(f9.pow(a, 3).unwrap(), Fe::ONE)
        );
        assert!(f9.parse("b").is_err());
        assert_eq!(
            Field::parse_spec("q=16;mod=a^4+a+1").unwrap(),
            Field::with_order(16).unwrap()
        );
        assert_eq!(Field::parse_spec("q=9").unwrap().spec_string(), "q=9");
    }

    #[test]
    fn extensions_embed_homomorphically() {
        for q in [2, 3, 4, 9, 16] {
            let f = Field::with_order(q).unwrap();
            for k in 2..=3 {
                let ext = f.extension(k).unwrap();
                assert_eq!(ext.field.order(), q.pow(k));
                let big = &ext.field;
                for a in f.elements() {
                    for b in f.elements() {
                        let (ea, eb) = (ext.embed[a.0 as usize], ext.embed[b.0 as usize]);
                        assert_eq!(ext.embed[f.add(a, b).0 as usize], big.add(ea, eb));
                        assert_eq!(ext.embed[f.mul(a, b).0 as usize], big.mul(ea, eb));
                    }
                }
            }
        }
        let ext = Field::with_order(16).unwrap().extension(4).unwrap();
        assert_eq!(ext.field.order(), 65536);
    }
}
