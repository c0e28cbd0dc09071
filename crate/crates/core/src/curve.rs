//! Genus-2 models `y^2 + h(x) y = f(x)`, their rational places, point counts
//! over small extensions and the L-polynomial.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::poly::Poly;

/// How the place(s) above `x = infinity` look.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfinityType {
    /// One rational Weierstrass place at infinity (odd-degree model).
    Ramified,
    /// Two rational places at infinity.
    Split,
    /// One place of degree 2 at infinity.
    Inert,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    field: Field,
    h: Poly,
    f: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    InfiniteRamified,
    /// `beta` is the value of `y / x^3` at the place.
    InfiniteSplit {
        beta: Fe,
    },
    AffineRamified {
        alpha: Fe,
        beta: Fe,
    },
    AffineSplit {
        alpha: Fe,
        beta: Fe,
    },
}

/// A rational place of a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub kind: PlaceKind,
}

impl Place {
    pub fn degree(&self) -> u32 {
        1
    }

    pub fn is_infinite(&self) -> bool {
        matches!(
            self.kind,
            PlaceKind::InfiniteRamified | PlaceKind::InfiniteSplit { .. }
        )
    }

    /// Affine coordinates, if the place is affine.
    pub fn affine(&self) -> Option<(Fe, Fe)> {
        match self.kind {
            PlaceKind::AffineRamified { alpha, beta } | PlaceKind::AffineSplit { alpha, beta } => {
                Some((alpha, beta))
            }
            _ => None,
        }
    }

    /// `P_inf`, `P_inf_{b}`, `P_{a}` or `P_{a,b}`.
    pub fn label(&self, k: &Field) -> String {
        match self.kind {
            PlaceKind::InfiniteRamified => "P_inf".into(),
            PlaceKind::InfiniteSplit { beta } => format!("P_inf_{{{}}}", k.format(beta)),
            PlaceKind::AffineRamified { alpha, .. } => format!("P_{{{}}}", k.format(alpha)),
            PlaceKind::AffineSplit { alpha, beta } => {
                format!("P_{{{},{}}}", k.format(alpha), k.format(beta))
            }
        }
    }
}

impl CurveModel {
    /// Builds a model and checks that it has genus exactly 2.
    pub fn new(field: Field, h: Poly, f: Poly) -> Result<CurveModel> {
        let m = CurveModel { field, h, f };
        if !m.validate_genus2()? {
            return Err(Error::InvalidModel(format!(
                "{m} is not a smooth genus-2 model"
            )));
        }
        Ok(m)
    }

    /// Builds a model without the genus check; see [`CurveModel::validate_genus2`].
    pub fn new_unchecked(field: Field, h: Poly, f: Poly) -> CurveModel {
        CurveModel { field, h, f }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    /// Genus-2 check. Odd characteristic: `h = 0`, `deg f` in {5, 6}, `f`
    /// squarefree. Characteristic 2: `h != 0`, and both affine charts are
    /// nonsingular, tested through `gcd(h, f'^2 + f h'^2)`.
    pub fn validate_genus2(&self) -> Result<bool> {
        let k = &self.field;
        if self.h.deg() > 3 || self.f.deg() > 6 {
            return Err(Error::Precondition(format!(
                "degree constraints violated: deg h = {}, deg f = {}",
                self.h.deg(),
                self.f.deg()
            )));
        }
        if k.characteristic() != 2 {
            if !matches!(self.f.deg(), 5 | 6) {
                return Err(Error::Precondition(format!(
                    "deg f = {} not in {{5, 6}}",
                    self.f.deg()
                )));
            }
            return Ok(self.h.is_zero() && self.f.is_squarefree(k)?);
        }
        if self.h.is_zero() {
            return Ok(false);
        }
        let affine_ok = |h: &Poly, f: &Poly| -> bool {
            let fd = f.derivative(k);
            let hd = h.derivative(k);
            let s = fd.square(k).add(&f.mul(&hd.square(k), k), k);
            h.gcd(&s, k).deg() == 0
        };
        if !affine_ok(&self.h, &self.f) {
            return Ok(false);
        }
        // second chart: x = 1/t, y = w / t^3, only t = 0 is new
        let hh = self.h.reverse(3);
        let ff = self.f.reverse(6);
        if hh.coeff(0).is_zero() {
            let fd = ff.derivative(k);
            let hd = hh.derivative(k);
            let s = fd.square(k).add(&ff.mul(&hd.square(k), k), k);
            if s.coeff(0).is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Coefficients `(h_3, f_6)` governing the places at infinity.
    pub fn infinity_coeffs(&self) -> (Fe, Fe) {
        (self.h.coeff(3), self.f.coeff(6))
    }

    pub fn infinity_type(&self) -> InfinityType {
        let k = &self.field;
        let (h3, f6) = self.infinity_coeffs();
        if k.characteristic() == 2 {
            if h3.is_zero() {
                InfinityType::Ramified
            } else if k.count_quadratic(h3, f6) == 2 {
                InfinityType::Split
            } else {
                InfinityType::Inert
            }
        } else if self.f.deg() == 5 {
            InfinityType::Ramified
        } else if k.legendre(self.f.lead()) == 1 {
            InfinityType::Split
        } else {
            InfinityType::Inert
        }
    }

    /// Rational places: infinity first, then affine by `alpha`, then by `beta`.
    pub fn rational_places(&self) -> Vec<Place> {
        let k = &self.field;
        let mut out = Vec::new();
        match self.infinity_type() {
            InfinityType::Ramified => out.push(Place {
                kind: PlaceKind::InfiniteRamified,
            }),
            InfinityType::Split => {
                let (h3, f6) = self.infinity_coeffs();
                for beta in k.solve_quadratic(h3, f6) {
                    out.push(Place {
                        kind: PlaceKind::InfiniteSplit { beta },
                    });
                }
            }
            InfinityType::Inert => {}
        }
        for alpha in k.elements() {
            let ys = k.solve_quadratic(self.h.eval(alpha, k), self.f.eval(alpha, k));
            match ys.as_slice() {
                [beta] => out.push(Place {
                    kind: PlaceKind::AffineRamified { alpha, beta: *beta },
                }),
                [b1, b2] => {
                    out.push(Place {
                        kind: PlaceKind::AffineSplit { alpha, beta: *b1 },
                    });
                    out.push(Place {
                        kind: PlaceKind::AffineSplit { alpha, beta: *b2 },
                    });
                }
                _ => {}
            }
        }
        out
    }

    /// Looks up a rational place by its label.
    pub fn place_by_label(&self, label: &str) -> Result<Place> {
        let label = label.trim();
        self.rational_places()
            .into_iter()
            .find(|p| p.label(&self.field) == label)
            .or_else(|| self.parse_place_label(label))
            .ok_or_else(|| Error::Parse(format!("no rational place '{label}' on {self}")))
    }

    /// Accepts alternative spellings of elements, e.g. `P_{0,-a}`.
    fn parse_place_label(&self, label: &str) -> Option<Place> {
        let k = &self.field;
        let places = self.rational_places();
        if let Some(rest) = label
            .strip_prefix("P_inf_{")
            .and_then(|r| r.strip_suffix('}'))
        {
            let b = k.parse(rest).ok()?;
            return places
                .into_iter()
                .find(|p| p.kind == PlaceKind::InfiniteSplit { beta: b });
        }
        let inner = label
            .strip_prefix("P_{")
            .and_then(|r| r.strip_suffix('}'))?;
        match inner.split_once(',') {
            Some((a, b)) => {
                let (a, b) = (k.parse(a).ok()?, k.parse(b).ok()?);
                places
                    .into_iter()
                    .find(|p| p.kind == PlaceKind::AffineSplit { alpha: a, beta: b })
            }
            None => {
                let a = k.parse(inner).ok()?;
                places.into_iter().find(
                    |p| matches!(p.kind, PlaceKind::AffineRamified { alpha, .. } if alpha == a),
                )
            }
        }
    }

    /// Number of points over the degree-k extension (k in 1..=4), by brute force.
    pub fn count_points_ext(&self, k: u32) -> Result<u64> {
        let ext = self.field.extension(k)?;
        let big = &ext.field;
        let mut n: u64 = 0;
        for x in big.elements() {
            let hx = self.h.eval_embedded(x, big, &ext.embed);
            let fx = self.f.eval_embedded(x, big, &ext.embed);
            n += big.count_quadratic(hx, fx) as u64;
        }
        let (h3, f6) = self.infinity_coeffs();
        n += big.count_quadratic(ext.embed[h3.0 as usize], ext.embed[f6.0 as usize]) as u64;
        Ok(n)
    }

    /// `(a1, a2)` with `L(t) = 1 + a1 t + a2 t^2 + q a1 t^3 + q^2 t^4`.
    pub fn l_polynomial(&self) -> Result<(i64, i64)> {
        let q = self.q() as i64;
        let n1 = self.count_points_ext(1)? as i64;
        let n2 = self.count_points_ext(2)? as i64;
        l_coefficients(q, n1, n2)
    }

    /// `h = L(1)`.
    pub fn class_number(&self) -> Result<u64> {
        let (a1, a2) = self.l_polynomial()?;
        Ok(class_number_from_l(self.q() as i64, a1, a2))
    }

    /// Number of places of degree 1 or 2.
    pub fn places_of_degree(&self, d: u32) -> Result<u64> {
        let n1 = self.count_points_ext(1)?;
        match d {
            1 => Ok(n1),
            2 => {
                let n2 = self.count_points_ext(2)?;
                if n2 < n1 || (n2 - n1) % 2 != 0 {
                    return Err(Error::Inconsistent(format!("N2 = {n2}, N1 = {n1}")));
                }
                Ok((n2 - n1) / 2)
            }
            _ => Err(Error::Precondition(format!(
                "place degree {d} not supported"
            ))),
        }
    }

    /// Parses `q=<spec>; h=<poly>; f=<poly>` (`h` may be omitted).
    pub fn parse(s: &str) -> Result<CurveModel> {
        let mut q = None;
        let mut modulus = None;
        let mut h_text = None;
        let mut f_text = None;
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad curve part '{part}'")))?;
            let val = val.trim();
            match key.trim() {
                "q" => {
                    q = Some(
                        val.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad q '{val}'")))?,
                    )
                }
                "mod" => modulus = Some(val.to_string()),
                "h" => h_text = Some(val.to_string()),
                "f" => f_text = Some(val.to_string()),
                other => return Err(Error::Parse(format!("unknown curve key '{other}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::Parse("curve needs q=".into()))?;
        let field = Field::from_order_and_modulus(q, modulus.as_deref())?;
        Self::from_parts(
            field,
            h_text.as_deref(),
            f_text
                .as_deref()
                .ok_or_else(|| Error::Parse("curve needs f=".into()))?,
        )
    }

    /// Builds a validated model from polynomial texts.
    pub fn from_parts(field: Field, h: Option<&str>, f: &str) -> Result<CurveModel> {
        let h = match h {
            Some(t) => Poly::parse(t, &field)?,
            None => Poly::zero(),
        };
        let f = Poly::parse(f, &field)?;
        CurveModel::new(field, h, f)
    }
}

impl fmt::Display for CurveModel {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.field;
        write!(out, "{}", k.spec_string())?;
        if !self.h.is_zero() || k.characteristic() == 2 {
            write!(out, "; h={}", self.h.format(k))?;
        }
        write!(out, "; f={}", self.f.format(k))
    }
}

/// L-polynomial coefficients from the point counts over F_q and F_{q^2}.
pub fn l_coefficients(q: i64, n1: i64, n2: i64) -> Result<(i64, i64)> {
    let a1 = n1 - (q + 1);
    let num = a1 * a1 - (q * q + 1 - n2);
    if num % 2 != 0 {
        return Err(Error::InvalidModel(format!(
            "non-integral a2 from N1={n1}, N2={n2}"
        )));
    }
    Ok((a1, num / 2))
}

pub fn class_number_from_l(q: i64, a1: i64, a2: i64) -> u64 {
    (1 + a1 + a2 + q * a1 + q * q) as u64
}

/// Point counts over F_{q^k}, k = 1..=4, predicted from the L-polynomial.
pub fn predicted_counts(q: i64, a1: i64, a2: i64) -> [i64; 4] {
    let (e1, e2, e3, e4) = (-a1, a2, -q * a1, q * q);
    let s1 = e1;
    let s2 = e1 * s1 - 2 * e2;
    let s3 = e1 * s2 - e2 * s1 + 3 * e3;
    let s4 = e1 * s3 - e2 * s2 + e3 * s1 - 4 * e4;
    [
        q + 1 - s1,
        q * q + 1 - s2,
        q.pow(3) + 1 - s3,
        q.pow(4) + 1 - s4,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example1() -> CurveModel {
        CurveModel::parse("q=2; h=x; f=x^5+x^3+x^2+x").unwrap()
    }

    fn f5_example() -> CurveModel {
        CurveModel::parse("q=5; f=x^5-x^3+x").unwrap()
    }

    #[test]
    fn validation() {
        assert!(example1().validate_genus2().unwrap());
        let k5 = Field::with_order(5).unwrap();
        let bad =
            CurveModel::new_unchecked(k5.clone(), Poly::zero(), Poly::parse("x^4", &k5).unwrap());
        assert!(bad.validate_genus2().is_err());
        let k2 = Field::with_order(2).unwrap();
        let insep =
            CurveModel::new_unchecked(k2.clone(), Poly::zero(), Poly::parse("x^5+1", &k2).unwrap());
        assert!(!insep.validate_genus2().unwrap());
        // repeated root
        let sing = CurveModel::new_unchecked(
            k5.clone(),
            Poly::zero(),
            Poly::parse("x^5+x^2", &k5).unwrap(),
        );
        assert!(!sing.validate_genus2().unwrap());
        // singular at infinity: deg h <= 2 and deg f <= 4 after clearing
        let k4 = Field::with_order(4).unwrap();
        let s = CurveModel::new_unchecked(
            k4.clone(),
            Poly::parse("x", &k4).unwrap(),
            Poly::parse("x^4+1", &k4).unwrap(),
        );
        assert!(!s.validate_genus2().unwrap());
    }

    #[test]
    fn example1_places_and_counts() {
        let c = example1();
        let labels: Vec<String> = c
            .rational_places()
            .iter()
            .map(|p| p.label(c.field()))
            .collect();
        assert_eq!(labels, ["P_inf", "P_{0}", "P_{1,0}", "P_{1,1}"]);
        assert_eq!(c.count_points_ext(1).unwrap(), 4);
        assert_eq!(c.count_points_ext(2).unwrap(), 8);
        assert_eq!(c.l_polynomial().unwrap(), (1, 2));
        assert_eq!(c.class_number().unwrap(), 10);
        assert_eq!(c.places_of_degree(1).unwrap(), 4);
        assert_eq!(c.places_of_degree(2).unwrap(), 2);
    }

    #[test]
    fn f5_places() {
        let c = f5_example();
        let places = c.rational_places();
        assert_eq!(places.len(), 10);
        // brute force: f(x) at all x, quadratic residues {1, 4}
        let k = c.field();
        let mut n = 1;
        for a in 0..5i64 {
            let v = (a.pow(5) - a.pow(3) + a).rem_euclid(5);
            n += match v {
                0 => 1,
                1 | 4 => 2,
                _ => 0,
            };
        }
        assert_eq!(places.len(), n);
        assert_eq!(places[0].kind, PlaceKind::InfiniteRamified);
        assert_eq!(
            places[1].kind,
            PlaceKind::AffineRamified {
                alpha: Fe(0),
                beta: Fe(0)
            }
        );
        assert_eq!(c.l_polynomial().unwrap().0, 4);
        assert_eq!(c.class_number().unwrap(), 64);
        assert_eq!(
            c.place_by_label("P_{4,3}").unwrap().affine(),
            Some((Fe(4), Fe(3)))
        );
        assert!(c.place_by_label("P_{2}").is_err());
        let _ = k;
    }

    #[test]
    fn f16_record_curve_places() {
        let c = CurveModel::parse("q=16; h=x^2+x; f=a^6*x^5+a^12*x^4+x^3+a^3*x^2+a^9*x").unwrap();
        let labels: Vec<String> = c
            .rational_places()
            .iter()
            .map(|p| p.label(c.field()))
            .collect();
        for l in [
            "P_inf",
            "P_{0}",
            "P_{1}",
            "P_{a^3,a^4}",
            "P_{a^3,a^10}",
            "P_{a^6,a^6}",
            "P_{a^6,a^12}",
            "P_{a^9,a^3}",
            "P_{a^9,a^9}",
        ] {
            assert!(labels.iter().any(|x| x == l), "missing {l} in {labels:?}");
        }
    }

    #[test]
    fn labels_round_trip() {
        for text in [
            "q=9; f=x^5+a^6*x^3+a^6*x^2+a^3*x",
            "q=7; f=3*x^6+x^2+2*x+1",
            "q=7; f=x^6+x^2+2*x+3",
            "q=4; h=x^3+1; f=x^2",
            "q=4; h=x^3+x; f=a*x^6+x^3+1",
        ] {
            let c = CurveModel::parse(text).unwrap();
            for p in c.rational_places() {
                assert_eq!(c.place_by_label(&p.label(c.field())).unwrap(), p);
            }
            assert_eq!(CurveModel::parse(&c.to_string()).unwrap(), c);
        }
        let c = CurveModel::parse("q=9; f=x^5+a^6*x^4+a^7*x^3+2*x^2+a^5*x+a^2").unwrap();
        let p = c.place_by_label("P_{0,-a}").unwrap();
        assert_eq!(p.label(c.field()), "P_{0,a^5}");
    }

    #[test]
    fn counts_consistent_with_l_polynomial() {
        let c = f5_example();
        let (a1, a2) = c.l_polynomial().unwrap();
        let pred = predicted_counts(5, a1, a2);
        for k in 1..=4 {
            assert_eq!(pred[k as usize - 1], c.count_points_ext(k).unwrap() as i64);
        }
    }
}
