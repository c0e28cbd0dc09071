//! Deterministic streams of genus-2 models covering every isomorphism class
//! over `F_q` (with redundancy).
//!
//! Odd characteristic: `y^2 = f` with `f` monic of degree 5, or of degree 6
//! with leading coefficient 1 or the first non-square and no rational root.
//! In both cases `f` is the translation representative of its orbit.
//! Characteristic 2: `y^2 + h y = f` with `h` the smallest monic polynomial
//! in its orbit under `x -> a x + b`, and `f` the canonical representative of
//! its class modulo `{u^2 + h u : deg u <= 3}`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curve::CurveModel;
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::jacobian::{enumerate_class_group, ClassGroup};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyMode {
    OddCharDeg5,
    OddCharDeg6,
    /// Degree 5 followed by degree 6.
    OddCharAll,
    Char2Full,
    ExplicitList,
}

impl FamilyMode {
    pub fn name(self) -> &'static str {
        match self {
            FamilyMode::OddCharDeg5 => "odd_char_deg5",
            FamilyMode::OddCharDeg6 => "odd_char_deg6",
            FamilyMode::OddCharAll => "odd_char_all",
            FamilyMode::Char2Full => "char2_full",
            FamilyMode::ExplicitList => "explicit_list",
        }
    }

    /// Complete family for the characteristic.
    pub fn default_for(k: &Field) -> FamilyMode {
        if k.characteristic() == 2 {
            FamilyMode::Char2Full
        } else {
            FamilyMode::OddCharAll
        }
    }
}

impl FromStr for FamilyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyMode> {
        Ok(match s {
            "odd_char_deg5" | "deg5" => FamilyMode::OddCharDeg5,
            "odd_char_deg6" | "deg6" => FamilyMode::OddCharDeg6,
            "odd_char_all" | "odd" => FamilyMode::OddCharAll,
            "char2_full" | "char2" => FamilyMode::Char2Full,
            "explicit_list" | "list" => FamilyMode::ExplicitList,
            _ => return Err(Error::Parse(format!("unknown family '{s}'"))),
        })
    }
}

impl fmt::Display for FamilyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct CurveFamilySpec {
    pub field: Field,
    pub mode: FamilyMode,
    /// Degree-6 family: drop `f` with a rational root (those curves also
    /// appear in the degree-5 family).
    pub skip_rational_roots: bool,
    /// Keep each model with this probability.
    pub sample: Option<f64>,
    pub seed: u64,
    /// Models for [`FamilyMode::ExplicitList`].
    pub explicit: Vec<CurveModel>,
}

impl CurveFamilySpec {
    pub fn new(field: Field, mode: FamilyMode) -> CurveFamilySpec {
        CurveFamilySpec {
            field,
            mode,
            skip_rational_roots: true,
            sample: None,
            seed: 0,
            explicit: Vec::new(),
        }
    }

    pub fn sampled(mut self, ratio: f64, seed: u64) -> CurveFamilySpec {
        self.sample = Some(ratio);
        self.seed = seed;
        self
    }

    /// One curve text per line; blank lines and `#` comments are skipped.
    pub fn explicit_list(field: Field, text: &str) -> Result<CurveFamilySpec> {
        let explicit = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(CurveModel::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(CurveFamilySpec {
            explicit,
            ..CurveFamilySpec::new(field, FamilyMode::ExplicitList)
        })
    }

    pub fn validate(&self) -> Result<()> {
        let char2 = self.field.characteristic() == 2;
        let ok = match self.mode {
            FamilyMode::OddCharDeg5 | FamilyMode::OddCharDeg6 | FamilyMode::OddCharAll => !char2,
            FamilyMode::Char2Full => char2,
            FamilyMode::ExplicitList => true,
        };
        if !ok {
            return Err(Error::Precondition(format!(
                "family {} does not fit q={}",
                self.mode,
                self.field.order()
            )));
        }
        if let Some(r) = self.sample {
            if !(r > 0.0 && r <= 1.0) {
                return Err(Error::Precondition(format!(
                    "sampling ratio {r} outside (0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Normalization constants of the stream, for auditing coverage.
    pub fn manifest(&self) -> String {
        let k = &self.field;
        let mut lines = vec![
            format!("family\t{}", self.mode),
            format!("field\t{}", k.spec_string()),
            format!("modulus\t{}", k.modulus_string()),
        ];
        let p = k.characteristic();
        match self.mode {
            FamilyMode::OddCharDeg5 | FamilyMode::OddCharAll | FamilyMode::OddCharDeg6 => {
                if self.mode != FamilyMode::OddCharDeg6 {
                    lines.push("deg5_leading\t1".into());
                    lines.push(translation_rule(5, p));
                }
                if self.mode != FamilyMode::OddCharDeg5 {
                    lines.push(format!("deg6_leading\t1,{}", k.format(first_nonsquare(k))));
                    lines.push(translation_rule(6, p));
                    lines.push(format!(
                        "deg6_skip_rational_roots\t{}",
                        self.skip_rational_roots
                    ));
                }
            }
            FamilyMode::Char2Full => {
                lines.push(
                    "h\tmonic, least coefficient vector in its orbit under x -> a*x+b".into(),
                );
                lines.push("f\tcanonical representative modulo {u^2+h*u : deg u <= 3}".into());
            }
            FamilyMode::ExplicitList => lines.push(format!("models\t{}", self.explicit.len())),
        }
        match self.sample {
            Some(r) => lines.push(format!("sample\t{r}\tseed\t{}", self.seed)),
            None => lines.push("sample\tnone".into()),
        }
        lines.join("\n") + "\n"
    }
}

fn translation_rule(n: u32, p: u32) -> String {
    if n % p != 0 {
        format!("deg{n}_translation\tx^{} coefficient 0", n - 1)
    } else {
        format!("deg{n}_translation\tleast coefficient vector over all translates")
    }
}

/// Smallest non-square in encoding order (odd characteristic).
pub fn first_nonsquare(k: &Field) -> Fe {
    k.elements()
        .find(|&e| k.legendre(e) == -1)
        .expect("odd fields have non-squares")
}

/// Representative of `{f(x + t)}`: the `x^(n-1)` coefficient is cleared when
/// `char` does not divide `n`, otherwise the least coefficient vector is taken.
pub fn translation_normal_form(f: &Poly, k: &Field) -> Poly {
    let Some(n) = f.degree() else {
        return f.clone();
    };
    if n == 0 {
        return f.clone();
    }
    let p = k.characteristic() as usize;
    if n % p != 0 {
        let nn = k.from_int(n as i64);
        let t = k.neg(
            k.div(f.coeff(n - 1), k.mul(nn, f.lead()))
                .expect("non-zero"),
        );
        return f.translate(t, k);
    }
    k.elements()
        .map(|t| f.translate(t, k))
        .min_by(|a, b| a.coeffs().cmp(b.coeffs()))
        .unwrap()
}

/// Normal form for odd characteristic with `deg f = 5`: monic via scaling, then translated.
pub fn odd_deg5_normal_form(f: &Poly, k: &Field) -> Result<Poly> {
    if f.deg() != 5 {
        return Err(Error::Precondition("expects degree 5".into()));
    }
    // x -> c x, y -> c^3 y turns leading c into 1
    let c = f.lead();
    let c_inv6 = k.pow(c, -6)?;
    let scaled: Vec<Fe> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &a)| k.mul(k.mul(a, k.pow(c, i as i64).unwrap()), c_inv6))
        .collect();
    Ok(translation_normal_form(&Poly::from_coeffs(scaled), k))
}

/// Monic `h`, least over `x -> a x + b`, with the substitution used.
fn char2_h_representative(h: &Poly, k: &Field) -> (Poly, Fe, Fe) {
    let mut best: Option<(Poly, Fe, Fe)> = None;
    for a in k.elements().filter(|e| !e.is_zero()) {
        for b in k.elements() {
            let cand = substitute(h, a, b, k).monic(k);
            if best
                .as_ref()
                .map_or(true, |(p, _, _)| cand.coeffs() < p.coeffs())
            {
                best = Some((cand, a, b));
            }
        }
    }
    best.expect("non-empty field")
}

/// `p(a x + b)`.
fn substitute(p: &Poly, a: Fe, b: Fe, k: &Field) -> Poly {
    let t = p.translate(b, k);
    let c: Vec<Fe> = t
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &c)| k.mul(c, k.pow(a, i as i64).unwrap()))
        .collect();
    Poly::from_coeffs(c)
}

/// F_2-subspace `{u^2 + h u : deg u <= 3}` of polynomials of degree <= 6,
/// as a reduced echelon basis over bit vectors (bit `i n + j` holds bit `j`
/// of coefficient `i`).
struct ArtinSchreierImage {
    n: u32,
    basis: Vec<(u32, u128)>,
}

impl ArtinSchreierImage {
    fn new(h: &Poly, k: &Field) -> ArtinSchreierImage {
        let n = k.degree();
        let mut rows: Vec<u128> = Vec::new();
        for i in 0..4 {
            for j in 0..n {
                let u = Poly::monomial(Fe(1 << j), i);
                rows.push(to_bits(&u.square(k).add(&h.mul(&u, k), k), n));
            }
        }
        // reduced row echelon form, pivots at the most significant bit
        let mut basis: Vec<(u32, u128)> = Vec::new();
        for mut r in rows {
            for &(piv, b) in &basis {
                if r >> piv & 1 == 1 {
                    r ^= b;
                }
            }
            if r == 0 {
                continue;
            }
            let piv = 127 - r.leading_zeros();
            for (_, b) in basis.iter_mut() {
                if *b >> piv & 1 == 1 {
                    *b ^= r;
                }
            }
            basis.push((piv, r));
        }
        ArtinSchreierImage { n, basis }
    }

    fn reduce(&self, f: &Poly) -> Poly {
        let mut r = to_bits(f, self.n);
        for &(piv, b) in &self.basis {
            if r >> piv & 1 == 1 {
                r ^= b;
            }
        }
        from_bits(r, self.n)
    }

    /// All canonical representatives, in increasing bit order.
    fn representatives(&self) -> impl Iterator<Item = Poly> + '_ {
        let free: Vec<u32> = (0..7 * self.n)
            .filter(|b| !self.basis.iter().any(|(p, _)| p == b))
            .collect();
        (0u64..1 << free.len()).map(move |mask| {
            let mut r = 0u128;
            for (i, &bit) in free.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    r |= 1 << bit;
                }
            }
            from_bits(r, self.n)
        })
    }
}

fn to_bits(f: &Poly, n: u32) -> u128 {
    let mut r = 0u128;
    for i in 0..7 {
        let c = f.coeff(i).0 as u128;
        r |= c << (i as u32 * n);
    }
    r
}

fn from_bits(r: u128, n: u32) -> Poly {
    let mask = (1u128 << n) - 1;
    Poly::from_coeffs((0..7).map(|i| Fe((r >> (i * n) & mask) as u32)).collect())
}

/// Characteristic-2 normal form `(h', f')` of `y^2 + h y = f`, isomorphic to the input.
pub fn char2_normal_form(h: &Poly, f: &Poly, k: &Field) -> Result<(Poly, Poly)> {
    if k.characteristic() != 2 || h.is_zero() || h.deg() > 3 {
        return Err(Error::Precondition(
            "expects characteristic 2 and 0 <= deg h <= 3".into(),
        ));
    }
    let (h2, a, b) = char2_h_representative(h, k);
    // x -> a x + b, y -> mu y with mu the leading coefficient of h(a x + b)
    let mu = substitute(h, a, b, k).lead();
    let mu2 = k.inv(k.mul(mu, mu))?;
    let f2 = substitute(f, a, b, k).scale(mu2, k);
    Ok((h2.clone(), ArtinSchreierImage::new(&h2, k).reduce(&f2)))
}

fn monic_h_representatives(k: &Field) -> Vec<Poly> {
    let mut out = Vec::new();
    for deg in 0..=3usize {
        let q = k.order() as u64;
        for idx in 0..q.pow(deg as u32) {
            let mut c: Vec<Fe> = (0..deg)
                .map(|i| Fe((idx / q.pow(i as u32) % q) as u32))
                .collect();
            c.push(Fe::ONE);
            let h = Poly::from_coeffs(c);
            if char2_h_representative(&h, k).0 == h {
                out.push(h);
            }
        }
    }
    out
}

/// Polynomials `lead * x^n + c_{n-1} x^{n-1} + ... + c_0` with the given
/// coefficient fixed to zero (if any), in counter order.
fn coefficient_sweep(
    k: &Field,
    n: usize,
    lead: Fe,
    zero_at: Option<usize>,
) -> impl Iterator<Item = Poly> {
    let q = k.order() as u64;
    let free: Vec<usize> = (0..n).filter(|&i| Some(i) != zero_at).collect();
    let total = q.pow(free.len() as u32);
    (0..total).map(move |mut idx| {
        let mut c = vec![Fe::ZERO; n + 1];
        c[n] = lead;
        for &i in &free {
            c[i] = Fe((idx % q) as u32);
            idx /= q;
        }
        Poly::from_coeffs(c)
    })
}

fn odd_family(k: &Field, n: usize, lead: Fe, skip_roots: bool) -> impl Iterator<Item = CurveModel> {
    let p = k.characteristic() as usize;
    let zero_at = (n % p != 0).then_some(n - 1);
    let kk = k.clone();
    coefficient_sweep(k, n, lead, zero_at)
        .filter(move |f| zero_at.is_some() || translation_normal_form(f, &kk) == *f)
        .filter({
            let kk = k.clone();
            move |f| !skip_roots || n != 6 || f.roots_in_field(&kk).map_or(false, |r| r.is_empty())
        })
        .filter_map({
            let kk = k.clone();
            move |f| {
                let c = CurveModel::new_unchecked(kk.clone(), Poly::zero(), f);
                c.validate_genus2().ok()?.then_some(c)
            }
        })
}

fn char2_family(k: &Field) -> impl Iterator<Item = CurveModel> {
    let kk = k.clone();
    monic_h_representatives(k).into_iter().flat_map(move |h| {
        let image = ArtinSchreierImage::new(&h, &kk);
        let reps: Vec<Poly> = image.representatives().collect();
        let kk = kk.clone();
        reps.into_iter().filter_map(move |f| {
            let c = CurveModel::new_unchecked(kk.clone(), h.clone(), f);
            c.validate_genus2().ok()?.then_some(c)
        })
    })
}

/// The model stream of `spec`, deterministic for a fixed spec.
pub fn enumerate_curves(
    spec: &CurveFamilySpec,
) -> Result<Box<dyn Iterator<Item = CurveModel> + Send>> {
    spec.validate()?;
    let k = spec.field.clone();
    let skip = spec.skip_rational_roots;
    let deg6 = |k: &Field| {
        let ns = first_nonsquare(k);
        odd_family(k, 6, Fe::ONE, skip).chain(odd_family(k, 6, ns, skip))
    };
    let base: Box<dyn Iterator<Item = CurveModel> + Send> = match spec.mode {
        FamilyMode::OddCharDeg5 => Box::new(odd_family(&k, 5, Fe::ONE, skip)),
        FamilyMode::OddCharDeg6 => Box::new(deg6(&k)),
        FamilyMode::OddCharAll => Box::new(odd_family(&k, 5, Fe::ONE, skip).chain(deg6(&k))),
        FamilyMode::Char2Full => Box::new(char2_family(&k)),
        FamilyMode::ExplicitList => Box::new(spec.explicit.clone().into_iter()),
    };
    Ok(match spec.sample {
        None => base,
        Some(r) => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            Box::new(base.filter(move |_| rng.gen_bool(r)))
        }
    })
}

/// Isomorphism invariants used for coarse deduplication.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub n1: u64,
    pub n2: u64,
    pub h: u64,
    pub factors: Vec<u64>,
}

pub fn fingerprint(model: &CurveModel) -> Result<Fingerprint> {
    Ok(fingerprint_of(&enumerate_class_group(model)?))
}

pub fn fingerprint_of(cg: &ClassGroup) -> Fingerprint {
    let c = cg.model();
    Fingerprint {
        n1: c.count_points_ext(1).expect("valid model"),
        n2: c.count_points_ext(2).expect("valid model"),
        h: cg.order(),
        factors: cg.invariant_factors().to_vec(),
    }
}
