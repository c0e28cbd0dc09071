//! Dense univariate polynomials over a [`Field`].
//!
//! Coefficients are little-endian with no trailing zeros, so the zero
//! polynomial is the empty vector. Arithmetic takes the field explicitly.

use crate::error::{Error, Result};
use crate::field::{split_signed_terms, Fe, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly(Vec<Fe>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![Fe::ONE])
    }

    pub fn x() -> Poly {
        Poly(vec![Fe::ZERO, Fe::ONE])
    }

    pub fn constant(c: Fe) -> Poly {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Fe, k: usize) -> Poly {
        let mut v = vec![Fe::ZERO; k + 1];
        v[k] = c;
        Poly::from_coeffs(v)
    }

    /// `x - a`
    pub fn linear(k: &Field, a: Fe) -> Poly {
        Poly(vec![k.neg(a), Fe::ONE])
    }

    pub fn from_coeffs(mut c: Vec<Fe>) -> Poly {
        while c.last().is_some_and(|e| e.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }

    /// Degree, `None` for the zero polynomial (which orders below every degree).
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree as a signed integer, -1 for zero.
    pub fn deg(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.0.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn lead(&self) -> Fe {
        self.0.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == Fe::ONE
    }

    pub fn add(&self, other: &Poly, k: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| k.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly, k: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::from_coeffs(
            (0..n)
                .map(|i| k.sub(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, k: &Field) -> Poly {
        Poly(self.0.iter().map(|&c| k.neg(c)).collect())
    }

    pub fn scale(&self, c: Fe, k: &Field) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|&e| k.mul(e, c)).collect())
    }

    pub fn mul(&self, other: &Poly, k: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fe::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn square(&self, k: &Field) -> Poly {
        self.mul(self, k)
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self, k: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = k.inv(self.lead()).expect("non-zero leading coefficient");
        self.scale(inv, k)
    }

    /// `(q, r)` with `self = q * divisor + r` and `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Poly, k: &Field) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = divisor.0.len() - 1;
        if self.0.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv_lead = k.inv(divisor.lead())?;
        let mut r = self.0.clone();
        let mut q = vec![Fe::ZERO; r.len() - db];
        for i in (0..q.len()).rev() {
            let c = k.mul(r[i + db], inv_lead);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &b) in divisor.0.iter().enumerate() {
                r[i + j] = k.sub(r[i + j], k.mul(c, b));
            }
        }
        r.truncate(db);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, divisor: &Poly, k: &Field) -> Result<Poly> {
        Ok(self.divmod(divisor, k)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly, k: &Field) -> Result<Poly> {
        let (q, r) = self.divmod(divisor, k)?;
        if !r.is_zero() {
            return Err(Error::Inconsistent(
                "polynomial division is not exact".into(),
            ));
        }
        Ok(q)
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly, k: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, k).expect("b non-zero");
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// `(g, s, t)` with `g = s*self + t*other` monic.
    pub fn xgcd(&self, other: &Poly, k: &Field) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1, k).expect("r1 non-zero");
            let s = s0.sub(&q.mul(&s1, k), k);
            let t = t0.sub(&q.mul(&t1, k), k);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = k.inv(r0.lead()).unwrap();
        (r0.scale(inv, k), s0.scale(inv, k), t0.scale(inv, k))
    }

    pub fn derivative(&self, k: &Field) -> Poly {
        Poly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.mul(c, k.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: Fe, k: &Field) -> Fe {
        self.0
            .iter()
            .rev()
            .fold(Fe::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// Evaluates after mapping coefficients through `embed` into a larger field.
    pub fn eval_embedded(&self, x: Fe, big: &Field, embed: &[Fe]) -> Fe {
        self.0.iter().rev().fold(Fe::ZERO, |acc, &c| {
            big.add(big.mul(acc, x), embed[c.0 as usize])
        })
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly, k: &Field) -> Result<Poly> {
        let mut base = self.rem(modulus, k)?;
        let mut acc = Poly::one().rem(modulus, k)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, k).rem(modulus, k)?;
            }
            base = base.square(k).rem(modulus, k)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// `self(x + t)`.
    pub fn translate(&self, t: Fe, k: &Field) -> Poly {
        let shift = Poly(vec![t, Fe::ONE]);
        self.0.iter().rev().fold(Poly::zero(), |acc, &c| {
            acc.mul(&shift, k).add(&Poly::constant(c), k)
        })
    }

    /// `x^n * self(1/x)` for the given formal degree `n >= deg self`.
    pub fn reverse(&self, n: usize) -> Poly {
        let mut v = vec![Fe::ZERO; n + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[n - i] = c;
        }
        Poly::from_coeffs(v)
    }

    pub fn is_squarefree(&self, k: &Field) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Precondition(
                "squarefree test of the zero polynomial".into(),
            ));
        }
        if self.deg() < 1 {
            return Ok(true);
        }
        let d = self.derivative(k);
        if d.is_zero() {
            // a p-th power
            return Ok(false);
        }
        Ok(self.gcd(&d, k).deg() == 0)
    }

    /// Roots in the field with multiplicities, in element order.
    pub fn roots_in_field(&self, k: &Field) -> Result<Vec<(Fe, u32)>> {
        if self.is_zero() {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        }
        let mut out = Vec::new();
        for a in k.elements() {
            let lin = Poly::linear(k, a);
            let mut g = self.clone();
            let mut m = 0;
            loop {
                let (q, r) = g.divmod(&lin, k)?;
                if !r.is_zero() {
                    break;
                }
                m += 1;
                g = q;
            }
            if m > 0 {
                out.push((a, m));
            }
        }
        Ok(out)
    }

    // --- text format ---

    /// Terms from the highest degree down, e.g. `a^6*x^5+x^3-1` style.
    pub fn format(&self, k: &Field) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let coeff = k.format(c);
            let coeff = if coeff.contains('+') {
                format!("({coeff})")
            } else {
                coeff
            };
            let mono = match i {
                0 => String::new(),
                1 => "x".into(),
                _ => format!("x^{i}"),
            };
            let term = match (coeff.as_str(), mono.is_empty()) {
                (c, true) => c.to_string(),
                ("1", false) => mono,
                (c, false) => format!("{c}*{mono}"),
            };
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&term);
        }
        out
    }

    /// Parses `c*x^k` terms joined by `+`/`-`; coefficients use the field grammar
    /// and may be parenthesised.
    pub fn parse(s: &str, k: &Field) -> Result<Poly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = Poly::zero();
        for (neg, term) in split_top_level(&s)? {
            let mut coeff = Fe::ONE;
            let mut power = 0usize;
            for factor in split_factors(term) {
                if let Some(rest) = factor.strip_prefix('x') {
                    power += if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| Error::Parse(format!("bad monomial '{factor}'")))?
                    };
                } else if let Some(inner) =
                    factor.strip_prefix('(').and_then(|f| f.strip_suffix(')'))
                {
                    coeff = k.mul(coeff, k.parse(inner)?);
                } else {
                    coeff = k.mul(coeff, k.parse(factor)?);
                }
            }
            if neg {
                coeff = k.neg(coeff);
            }
            acc = acc.add(&Poly::monomial(coeff, power), k);
        }
        Ok(acc)
    }
}

fn split_factors(term: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in term.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '*' if depth == 0 => {
                out.push(&term[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&term[start..]);
    out
}

/// Like the field's term splitter but ignores signs inside parentheses.
fn split_top_level(s: &str) -> Result<Vec<(bool, &str)>> {
    if !s.contains('(') {
        return split_signed_terms(s);
    }
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let (mut start, mut neg, mut depth) = (0, false, 0);
    if bytes[0] == b'-' || bytes[0] == b'+' {
        neg = bytes[0] == b'-';
        start = 1;
    }
    for i in start..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && bytes[i - 1] != b'^' => {
                out.push((neg, &s[start..i]));
                neg = bytes[i] == b'-';
                start = i + 1;
            }
            _ => {}
        }
    }
    if start >= s.len() {
        return Err(Error::Parse(format!("dangling sign in '{s}'")));
    }
    out.push((neg, &s[start..]));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, k: &Field) -> Poly {
        Poly::parse(s, k).unwrap()
    }

    #[test]
    fn gcd_and_eval() {
        let k = Field::with_order(5).unwrap();
        assert_eq!(p("x^2-1", &k).gcd(&p("x-1", &k), &k), p("x-1", &k));
        assert_eq!(p("x^5-x^3+x", &k).eval(Fe(4), &k), Fe(4));
        assert!(p("x^5", &k).derivative(&k).is_zero());
        assert!(p("x", &k).divmod(&Poly::zero(), &k).is_err());
    }

    #[test]
    fn squarefree() {
        let k = Field::with_order(5).unwrap();
        assert!(p("x^5-x^3+x", &k).is_squarefree(&k).unwrap());
        assert!(!p("x^2", &k).is_squarefree(&k).unwrap());
        assert!(!p("x^5", &k).is_squarefree(&k).unwrap());
        assert!(Poly::zero().is_squarefree(&k).is_err());
    }

    #[test]
    fn roots() {
        let k5 = Field::with_order(5).unwrap();
        assert_eq!(
            p("x^5-x^3+x", &k5).roots_in_field(&k5).unwrap(),
            vec![(Fe(0), 1)]
        );
        for q in [2, 16] {
            let k = Field::with_order(q).unwrap();
            assert_eq!(
                p("x^2+x", &k).roots_in_field(&k).unwrap(),
                vec![(Fe(0), 1), (Fe(1), 1)]
            );
        }
        assert_eq!(p("x^3", &k5).roots_in_field(&k5).unwrap(), vec![(Fe(0), 3)]);
    }

    #[test]
    fn text_format() {
        let k = Field::with_order(16).unwrap();
        let s = "a^6*x^5+a^12*x^4+x^3+a^3*x^2+a^9*x";
        assert_eq!(p(s, &k).format(&k), s);
        let k5 = Field::with_order(5).unwrap();
        assert_eq!(p("x^5+x^2-x", &k5).format(&k5), "x^5+x^2+4*x");
        assert_eq!(p("-1", &k5), Poly::constant(Fe(4)));
        assert!(Poly::parse("x^", &k5).is_err());
        let k9 = Field::new(3, 2, Some(vec![1, 0, 1])).unwrap();
        let f = p("(a+1)*x^2+x", &k9);
        assert_eq!(p(&f.format(&k9), &k9), f);
    }

    #[test]
    fn translate_and_reverse() {
        let k = Field::with_order(7).unwrap();
        let f = p("x^3+2*x+5", &k);
        let g = f.translate(Fe(3), &k);
        for a in k.elements() {
            assert_eq!(g.eval(a, &k), f.eval(k.add(a, Fe(3)), &k));
        }
        assert_eq!(p("x^2+3", &k).reverse(3), p("3*x^3+x", &k));
    }

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 0..max_len)
    }

    proptest! {
        #[test]
        fn divmod_round_trip(a in arb_poly(9, 9), b in arb_poly(9, 5)) {
            let k = Field::with_order(9).unwrap();
            let a = Poly::from_coeffs(a.into_iter().map(Fe).collect());
            let b = Poly::from_coeffs(b.into_iter().map(Fe).collect());
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b, &k).unwrap();
            prop_assert!(r.deg() < b.deg());
            prop_assert_eq!(q.mul(&b, &k).add(&r, &k), a);
        }

        #[test]
        fn eval_is_multiplicative(a in arb_poly(16, 6), b in arb_poly(16, 6), x in 0u32..16) {
            let k = Field::with_order(16).unwrap();
            let a = Poly::from_coeffs(a.into_iter().map(Fe).collect());
            let b = Poly::from_coeffs(b.into_iter().map(Fe).collect());
            prop_assert_eq!(a.mul(&b, &k).eval(Fe(x), &k), k.mul(a.eval(Fe(x), &k), b.eval(Fe(x), &k)));
        }

        #[test]
        fn gcd_divides_and_xgcd_combines(a in arb_poly(5, 7), b in arb_poly(5, 7)) {
            let k = Field::with_order(5).unwrap();
            let a = Poly::from_coeffs(a.into_iter().map(Fe).collect());
            let b = Poly::from_coeffs(b.into_iter().map(Fe).collect());
            prop_assume!(!a.is_zero() && !b.is_zero());
            let g = a.gcd(&b, &k);
            prop_assert!(a.rem(&g, &k).unwrap().is_zero());
            prop_assert!(b.rem(&g, &k).unwrap().is_zero());
            let (g2, s, t) = a.xgcd(&b, &k);
            prop_assert_eq!(&g2, &g);
            prop_assert_eq!(s.mul(&a, &k).add(&t.mul(&b, &k), &k), g.clone());
            for (r, _) in a.roots_in_field(&k).unwrap() {
                if b.eval(r, &k).is_zero() {
                    prop_assert!(g.eval(r, &k).is_zero());
                }
            }
        }
    }
}
