//! Degree-zero divisor class group of a genus-2 model.
//!
//! Classes are reduced Mumford pairs `(u, v)` with `deg u <= 2`. The group law
//! is Cantor composition followed by reduction. Three model shapes are
//! handled:
//!
//! * ramified infinity (odd-degree model): the classical representation
//!   `div(u, v) - deg(u) P_inf`;
//! * split infinity: the balanced representation
//!   `div(u, v) + n P+ + (2 - deg u - n) P- - (P+ + P-)` with `0 <= n <= 2 - deg u`;
//! * inert infinity: `div(u, v) - (deg u / 2) P_inf2` with `deg u` in {0, 2}.
//!
//! [`normalize_model`] moves a rational Weierstrass point to infinity when one
//! exists, so the even shapes are only used when it does not.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::abgroup::AbelianStructure;
use crate::curve::{CurveModel, InfinityType, Place, PlaceKind};
use crate::error::{Error, Result};
use crate::field::{Fe, Field};
use crate::intmat::smith_normal_form;
use crate::poly::Poly;

/// A reduced divisor class. `n` is the balance counter (split infinity only).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MumfordClass {
    pub u: Poly,
    pub v: Poly,
    pub n: u8,
}

impl Ord for MumfordClass {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.u.deg(), &self.u, &self.v, self.n).cmp(&(other.u.deg(), &other.u, &other.v, other.n))
    }
}

impl PartialOrd for MumfordClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl MumfordClass {
    /// `(u, v)`, or `(u, v; n=k)` for split-infinity models.
    pub fn text(&self, k: &Field, balanced: bool) -> String {
        if balanced {
            format!("({}, {}; n={})", self.u.format(k), self.v.format(k), self.n)
        } else {
            format!("({}, {})", self.u.format(k), self.v.format(k))
        }
    }
}

/// Working divisor: `div(u, v)` plus multiplicities at the infinite places
/// (only tracked for split infinity).
#[derive(Clone, Debug)]
struct Div {
    u: Poly,
    v: Poly,
    np: i64,
    nm: i64,
}

/// Coordinate change from an input model to its normalized model:
/// `x = rho + 1/X, y = Y / X^3` (when `rho` is set), then `Y = Y' + shift(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateMap {
    pub rho: Option<Fe>,
    pub shift: Poly,
}

impl CoordinateMap {
    pub fn is_identity(&self) -> bool {
        self.rho.is_none() && self.shift.is_zero()
    }
}

/// An input model together with an isomorphic model suited for arithmetic.
#[derive(Clone, Debug)]
pub struct NormalizedModel {
    pub original: CurveModel,
    pub model: CurveModel,
    pub map: CoordinateMap,
}

impl NormalizedModel {
    /// Image of a rational place of the original model.
    pub fn map_place(&self, p: &Place) -> Result<Place> {
        let k = self.original.field();
        let shift = &self.map.shift;
        // coordinates after the x-move, then shifted
        let target: Option<(Fe, Fe)> = match (self.map.rho, p.kind) {
            (None, PlaceKind::InfiniteRamified) => None,
            (None, PlaceKind::InfiniteSplit { beta }) => {
                let b = k.sub(beta, shift.coeff(3));
                return self.find(|q| q.kind == PlaceKind::InfiniteSplit { beta: b }, p);
            }
            (None, _) => {
                let (a, b) = p.affine().expect("affine");
                Some((a, k.sub(b, shift.eval(a, k))))
            }
            (Some(_), PlaceKind::InfiniteSplit { beta }) => {
                Some((Fe::ZERO, k.sub(beta, shift.coeff(0))))
            }
            (Some(_), PlaceKind::InfiniteRamified) => {
                return Err(Error::Inconsistent(
                    "ramified infinity is never moved".into(),
                ))
            }
            (Some(rho), _) => {
                let (a, b) = p.affine().expect("affine");
                if a == rho {
                    None
                } else {
                    let xx = k.inv(k.sub(a, rho))?;
                    let yy = k.mul(b, k.pow(xx, 3)?);
                    Some((xx, k.sub(yy, shift.eval(xx, k))))
                }
            }
        };
        match target {
            None => self.find(|q| q.kind == PlaceKind::InfiniteRamified, p),
            Some((a, b)) => self.find(|q| q.affine() == Some((a, b)), p),
        }
    }

    fn find(&self, pred: impl Fn(&Place) -> bool, orig: &Place) -> Result<Place> {
        self.model
            .rational_places()
            .into_iter()
            .find(pred)
            .ok_or_else(|| {
                Error::Inconsistent(format!(
                    "place {} has no image",
                    orig.label(self.original.field())
                ))
            })
    }
}

/// Moves a rational Weierstrass point to infinity when there is one.
pub fn normalize_model(model: &CurveModel) -> Result<NormalizedModel> {
    if !model.validate_genus2()? {
        return Err(Error::InvalidModel(model.to_string()));
    }
    let k = model.field();
    let char2 = k.characteristic() == 2;
    let identity = |m: &CurveModel| NormalizedModel {
        original: model.clone(),
        model: m.clone(),
        map: CoordinateMap {
            rho: None,
            shift: Poly::zero(),
        },
    };
    let (mut h, mut f, rho) = match model.infinity_type() {
        InfinityType::Ramified => (model.h().clone(), model.f().clone(), None),
        _ => {
            let weier = if char2 { model.h() } else { model.f() };
            let Some(&(rho, _)) = weier.roots_in_field(k)?.first() else {
                return Ok(identity(model));
            };
            let h = model.h().translate(rho, k).reverse(3);
            let f = model.f().translate(rho, k).reverse(6);
            (h, f, Some(rho))
        }
    };
    let mut shift = Poly::zero();
    if char2 && !f.coeff(6).is_zero() {
        // y -> y + c x^3 kills the x^6 term since h has no x^3 term here
        let c = k.sqrt(f.coeff(6)).expect("char 2 square roots exist");
        shift = Poly::monomial(c, 3);
        f = f.sub(&shift.square(k), k).sub(&h.mul(&shift, k), k);
    }
    if rho.is_none() && shift.is_zero() {
        return Ok(identity(model));
    }
    h = Poly::from_coeffs(h.coeffs().to_vec());
    let normalized = CurveModel::new(k.clone(), h, f)?;
    Ok(NormalizedModel {
        original: model.clone(),
        model: normalized,
        map: CoordinateMap { rho, shift },
    })
}

/// Group law on the classes of a normalized model.
#[derive(Clone, Debug)]
pub struct Jacobian {
    model: CurveModel,
    inf: InfinityType,
    /// Split infinity: `V` with `deg(V^2 + hV - f) <= 2` (the branch at `P+`),
    /// its conjugate `-V - h`, and `deg(V^2 + hV - f)`.
    vplus: Poly,
    vminus: Poly,
    e_deg: i64,
}

impl Jacobian {
    pub fn new(model: &CurveModel) -> Result<Jacobian> {
        let k = model.field();
        let inf = model.infinity_type();
        let (mut vplus, mut vminus, mut e_deg) = (Poly::zero(), Poly::zero(), 0);
        if inf == InfinityType::Ramified && model.f().deg() > 5 {
            return Err(Error::Precondition(format!(
                "ramified model needs deg f <= 5: {model}"
            )));
        }
        if inf == InfinityType::Split {
            let (h3, f6) = model.infinity_coeffs();
            let v3 = k.solve_quadratic(h3, f6)[0];
            let denom = k.add(k.add(v3, v3), h3);
            let mut v = Poly::monomial(v3, 3);
            let resid = |v: &Poly| v.square(k).add(&model.h().mul(v, k), k).sub(model.f(), k);
            for deg in (3..=5).rev() {
                let c = resid(&v).coeff(deg);
                let t = k.neg(k.div(c, denom)?);
                v = v.add(&Poly::monomial(t, deg - 3), k);
            }
            let e = resid(&v);
            if e.deg() > 2 || e.is_zero() {
                return Err(Error::Inconsistent(format!(
                    "no expansion at infinity for {model}"
                )));
            }
            e_deg = e.deg() as i64;
            vminus = v.neg(k).sub(model.h(), k);
            vplus = v;
        }
        Ok(Jacobian {
            model: model.clone(),
            inf,
            vplus,
            vminus,
            e_deg,
        })
    }

    pub fn model(&self) -> &CurveModel {
        &self.model
    }

    pub fn infinity_type(&self) -> InfinityType {
        self.inf
    }

    fn k(&self) -> &Field {
        self.model.field()
    }

    pub fn identity(&self) -> MumfordClass {
        MumfordClass {
            u: Poly::one(),
            v: Poly::zero(),
            n: u8::from(self.inf == InfinityType::Split),
        }
    }

    fn to_div(&self, c: &MumfordClass) -> Div {
        let np = c.n as i64 - 1;
        let nm = -(c.u.deg() as i64) - np;
        Div {
            u: c.u.clone(),
            v: c.v.clone(),
            np,
            nm,
        }
    }

    fn to_class(&self, d: Div) -> MumfordClass {
        let n = if self.inf == InfinityType::Split {
            (d.np + 1) as u8
        } else {
            0
        };
        MumfordClass { u: d.u, v: d.v, n }
    }

    /// Checks the Mumford invariants of a class.
    pub fn is_valid(&self, c: &MumfordClass) -> bool {
        let k = self.k();
        if !c.u.is_monic() || c.u.deg() > 2 || c.v.deg() >= c.u.deg() {
            return false;
        }
        let w =
            c.v.square(k)
                .add(&self.model.h().mul(&c.v, k), k)
                .sub(self.model.f(), k);
        if !w.rem(&c.u, k).map(|r| r.is_zero()).unwrap_or(false) {
            return false;
        }
        match self.inf {
            InfinityType::Ramified => c.n == 0,
            InfinityType::Inert => c.n == 0 && c.u.deg() % 2 == 0,
            InfinityType::Split => (c.n as isize) <= 2 - c.u.deg(),
        }
    }

    /// Cantor composition; the result is semi-reduced.
    fn compose(&self, a: &Div, b: &Div) -> Div {
        let k = self.k();
        let (h, f) = (self.model.h(), self.model.f());
        let (d0, e1, e2) = a.u.xgcd(&b.u, k);
        let (d, s1, s2, s3) = if d0.deg() == 0 {
            (Poly::one(), e1, e2, Poly::zero())
        } else {
            let (d, c1, c2) = d0.xgcd(&a.v.add(&b.v, k).add(h, k), k);
            (d, c1.mul(&e1, k), c1.mul(&e2, k), c2)
        };
        let mut u = a.u.mul(&b.u, k);
        let mut num = s1
            .mul(&a.u, k)
            .mul(&b.v, k)
            .add(&s2.mul(&b.u, k).mul(&a.v, k), k);
        if !s3.is_zero() {
            num = num.add(&s3.mul(&a.v.mul(&b.v, k).add(f, k), k), k);
        }
        let removed = d.deg().max(0) as i64;
        if removed > 0 {
            u = u.div_exact(&d.square(k), k).expect("d^2 divides u1 u2");
            num = num.div_exact(&d, k).expect("d divides the numerator");
        }
        let v = num.rem(&u, k).expect("u monic");
        Div {
            u,
            v,
            np: a.np + b.np + removed,
            nm: a.nm + b.nm + removed,
        }
    }

    fn reduce(&self, mut d: Div) -> Div {
        let k = self.k();
        let (h, f) = (self.model.h(), self.model.f());
        for _ in 0..64 {
            let deg = d.u.deg();
            let split = self.inf == InfinityType::Split;
            if deg <= 2 && (!split || (d.np >= -1 && d.nm >= -1)) {
                return d;
            }
            if !split {
                let w = d.v.square(k).add(&h.mul(&d.v, k), k).sub(f, k);
                let u2 = w
                    .div_exact(&d.u, k)
                    .expect("u divides v^2 + hv - f")
                    .monic(k);
                let v2 = d.v.neg(k).sub(h, k).rem(&u2, k).unwrap();
                d = Div {
                    u: u2,
                    v: v2,
                    np: 0,
                    nm: 0,
                };
                continue;
            }
            let use_plus = if deg > 2 { d.nm < d.np } else { d.nm < -1 };
            let branch = if use_plus { &self.vplus } else { &self.vminus };
            let r = d.v.sub(branch, k).rem(&d.u, k).unwrap();
            let vt = branch.add(&r, k);
            let w = vt.square(k).add(&h.mul(&vt, k), k).sub(f, k);
            let u2 = w.div_exact(&d.u, k).expect("u divides the norm").monic(k);
            let pole_near = if r.is_zero() {
                self.e_deg - 3
            } else {
                r.deg() as i64
            };
            let pole_far = w.deg() as i64 - pole_near;
            let du2 = u2.deg() as i64;
            let (dn_near, dn_far) = (pole_near - du2, pole_far - du2);
            if use_plus {
                d.np += dn_near;
                d.nm += dn_far;
            } else {
                d.nm += dn_near;
                d.np += dn_far;
            }
            d.v = vt.neg(k).sub(h, k).rem(&u2, k).unwrap();
            d.u = u2;
        }
        panic!("reduction did not terminate on {}", self.model);
    }

    pub fn add(&self, a: &MumfordClass, b: &MumfordClass) -> MumfordClass {
        let d = self.compose(&self.to_div(a), &self.to_div(b));
        self.to_class(self.reduce(d))
    }

    pub fn neg(&self, a: &MumfordClass) -> MumfordClass {
        let k = self.k();
        let mut d = self.to_div(a);
        let deg = d.u.deg() as i64;
        d.v = d.v.neg(k).sub(self.model.h(), k).rem(&d.u, k).unwrap();
        d.np = -d.np - deg;
        d.nm = -d.nm - deg;
        self.to_class(self.reduce(d))
    }

    pub fn sub(&self, a: &MumfordClass, b: &MumfordClass) -> MumfordClass {
        self.add(a, &self.neg(b))
    }

    /// `m * a` by double-and-add; negative multiples allowed.
    pub fn mul(&self, a: &MumfordClass, m: i64) -> MumfordClass {
        let mut base = if m < 0 { self.neg(a) } else { a.clone() };
        let mut e = m.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn point_div(&self, p: &Place) -> Result<Div> {
        let k = self.k();
        Ok(match p.kind {
            PlaceKind::InfiniteRamified => Div {
                u: Poly::one(),
                v: Poly::zero(),
                np: 0,
                nm: 0,
            },
            PlaceKind::InfiniteSplit { beta } => {
                if self.inf != InfinityType::Split {
                    return Err(Error::NotInGroup(
                        "split infinite place on a non-split model".into(),
                    ));
                }
                if beta == self.vplus.coeff(3) {
                    Div {
                        u: Poly::one(),
                        v: Poly::zero(),
                        np: 0,
                        nm: 0,
                    }
                } else {
                    Div {
                        u: Poly::one(),
                        v: Poly::zero(),
                        np: -1,
                        nm: 1,
                    }
                }
            }
            PlaceKind::AffineRamified { alpha, beta } | PlaceKind::AffineSplit { alpha, beta } => {
                let on_curve = k.add(
                    k.mul(beta, beta),
                    k.mul(self.model.h().eval(alpha, k), beta),
                ) == self.model.f().eval(alpha, k);
                if !on_curve {
                    return Err(Error::NotInGroup("place not on model".into()));
                }
                Div {
                    u: Poly::linear(k, alpha),
                    v: Poly::constant(beta),
                    np: -1,
                    nm: 0,
                }
            }
        })
    }

    /// The class `[P - O]` for rational places of this (normalized) model.
    pub fn place_difference(&self, p: &Place, o: &Place) -> Result<MumfordClass> {
        let k = self.k();
        if self.inf == InfinityType::Inert {
            let dp = self.point_div(p)?;
            let mut dneg = self.point_div(o)?;
            // the conjugate of O
            dneg.v = dneg
                .v
                .neg(k)
                .sub(self.model.h(), k)
                .rem(&dneg.u, k)
                .unwrap();
            return Ok(self.to_class(self.reduce(self.compose(&dp, &dneg))));
        }
        let dp = self.to_class(self.reduce(self.point_div(p)?));
        let dq = self.to_class(self.reduce(self.point_div(o)?));
        Ok(self.sub(&dp, &dq))
    }

    /// Every reduced class, in canonical order.
    pub fn enumerate(&self) -> Vec<MumfordClass> {
        let k = self.k();
        let (h, f) = (self.model.h(), self.model.f());
        let mut out = Vec::new();
        let split = self.inf == InfinityType::Split;
        let even = self.inf == InfinityType::Inert;
        let counters = |deg: u8| -> Vec<u8> {
            if split {
                (0..=2 - deg).collect()
            } else {
                vec![0]
            }
        };
        for n in counters(0) {
            out.push(MumfordClass {
                u: Poly::one(),
                v: Poly::zero(),
                n,
            });
        }
        if !even {
            for a in k.elements() {
                for b in k.solve_quadratic(h.eval(a, k), f.eval(a, k)) {
                    for n in counters(1) {
                        out.push(MumfordClass {
                            u: Poly::linear(k, a),
                            v: Poly::constant(b),
                            n,
                        });
                    }
                }
            }
        }
        // degree 2: u = x^2 + c1 x + c0, v = v1 x + v0, arithmetic mod u
        for c0 in k.elements() {
            for c1 in k.elements() {
                let u = Poly::from_coeffs(vec![c0, c1, Fe::ONE]);
                let fr = f.rem(&u, k).unwrap();
                let hr = h.rem(&u, k).unwrap();
                let (f0, f1) = (fr.coeff(0), fr.coeff(1));
                let (h0, h1) = (hr.coeff(0), hr.coeff(1));
                // (a0 + a1 x)(b0 + b1 x) mod u
                let mulm = |a0: Fe, a1: Fe, b0: Fe, b1: Fe| -> (Fe, Fe) {
                    let t = k.mul(a1, b1);
                    (
                        k.sub(k.mul(a0, b0), k.mul(t, c0)),
                        k.sub(k.add(k.mul(a0, b1), k.mul(a1, b0)), k.mul(t, c1)),
                    )
                };
                for v1 in k.elements() {
                    for v0 in k.elements() {
                        let (s0, s1) = mulm(v0, v1, v0, v1);
                        let (t0, t1) = mulm(h0, h1, v0, v1);
                        if k.add(s0, t0) == f0 && k.add(s1, t1) == f1 {
                            for n in counters(2) {
                                out.push(MumfordClass {
                                    u: u.clone(),
                                    v: Poly::from_coeffs(vec![v0, v1]),
                                    n,
                                });
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }
}

/// `Cl(F)` with its invariant factors and a discrete-log table.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    normalized: NormalizedModel,
    jac: Jacobian,
    elements: Vec<MumfordClass>,
    index: HashMap<MumfordClass, usize>,
    vectors: Vec<Vec<i64>>,
    structure: AbelianStructure,
    generators: Vec<MumfordClass>,
}

/// Enumerates `Cl(F)`, checks its order against `L(1)` and determines its structure.
///
/// Generators are collected greedily in canonical element order; the relation
/// lattice they satisfy is brought to Smith form, which yields the invariant
/// factors and coordinates for every element.
pub fn enumerate_class_group(model: &CurveModel) -> Result<ClassGroup> {
    let normalized = normalize_model(model)?;
    let jac = Jacobian::new(&normalized.model)?;
    let elements = jac.enumerate();
    let h = model.class_number()?;
    if elements.len() as u64 != h {
        return Err(Error::Inconsistent(format!(
            "{} reduced classes but L(1) = {h} for {model}",
            elements.len()
        )));
    }
    let index: HashMap<MumfordClass, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, c)| (c, i))
        .collect();
    let n = elements.len();

    // greedy generation with coordinates over the chosen generators
    let mut coords: Vec<Option<Vec<i64>>> = vec![None; n];
    let id = index[&jac.identity()];
    coords[id] = Some(Vec::new());
    let mut members = vec![id];
    let mut gens: Vec<usize> = Vec::new();
    let mut relations: Vec<Vec<i64>> = Vec::new();
    while members.len() < n {
        let s = (0..n)
            .find(|&i| coords[i].is_none())
            .expect("group not yet exhausted");
        let g = gens.len();
        gens.push(s);
        for c in coords.iter_mut().flatten() {
            c.push(0);
        }
        for r in relations.iter_mut() {
            r.push(0);
        }
        let base: Vec<usize> = members.clone();
        let mut cur = elements[s].clone();
        let mut j = 1i64;
        loop {
            let ci = *index.get(&cur).ok_or_else(|| {
                Error::Inconsistent(format!("sum left the element table on {model}"))
            })?;
            if let Some(c) = &coords[ci] {
                let mut rel: Vec<i64> = c.iter().map(|x| -x).collect();
                rel[g] += j;
                relations.push(rel);
                break;
            }
            for &x in &base {
                let y = jac.add(&elements[x], &cur);
                let yi = *index.get(&y).ok_or_else(|| {
                    Error::Inconsistent(format!("sum left the element table on {model}"))
                })?;
                if coords[yi].is_some() {
                    return Err(Error::Inconsistent(
                        "coset overlap during generation".into(),
                    ));
                }
                let mut c = coords[x].clone().unwrap();
                c[g] += j;
                coords[yi] = Some(c);
                members.push(yi);
            }
            cur = jac.add(&cur, &elements[s]);
            j += 1;
        }
    }

    let k = gens.len();
    let (diag, v) = smith_normal_form(&relations, k);
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let factors: Vec<u64> = keep.iter().map(|&i| diag[i] as u64).collect();
    let structure = AbelianStructure::new(factors)?;
    if structure.order() != h {
        return Err(Error::Inconsistent(format!(
            "structure {structure} does not have order {h}"
        )));
    }
    let vectors: Vec<Vec<i64>> = coords
        .into_iter()
        .map(|c| {
            let c = c.expect("every element reached");
            keep.iter()
                .map(|&col| {
                    let x: i64 = c.iter().zip(&v).map(|(a, row)| a * row[col]).sum();
                    x.rem_euclid(diag[col])
                })
                .collect()
        })
        .collect();
    let generators = (0..keep.len())
        .map(|i| {
            let pos = vectors
                .iter()
                .position(|vec| vec.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
                .expect("unit vectors are hit");
            elements[pos].clone()
        })
        .collect();
    Ok(ClassGroup {
        normalized,
        jac,
        elements,
        index,
        vectors,
        structure,
        generators,
    })
}

impl ClassGroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn structure(&self) -> &AbelianStructure {
        &self.structure
    }

    /// Invariant factors `d_1 | ... | d_r`.
    pub fn invariant_factors(&self) -> &[u64] {
        self.structure.factors()
    }

    pub fn elements(&self) -> &[MumfordClass] {
        &self.elements
    }

    pub fn generators(&self) -> &[MumfordClass] {
        &self.generators
    }

    pub fn jacobian(&self) -> &Jacobian {
        &self.jac
    }

    pub fn normalized(&self) -> &NormalizedModel {
        &self.normalized
    }

    pub fn model(&self) -> &CurveModel {
        &self.normalized.original
    }

    pub fn to_vector(&self, c: &MumfordClass) -> Result<&[i64]> {
        let i = self
            .index
            .get(c)
            .ok_or_else(|| Error::NotInGroup(c.text(self.jac.model.field(), false)))?;
        Ok(&self.vectors[*i])
    }

    /// Element with the given coordinate vector.
    pub fn from_vector(&self, v: &[i64]) -> Result<&MumfordClass> {
        let v = self.structure.reduce(v);
        self.vectors
            .iter()
            .position(|w| *w == v)
            .map(|i| &self.elements[i])
            .ok_or_else(|| Error::NotInGroup(format!("{v:?}")))
    }

    /// `[P - O]` for rational places `P`, `O` of the original model.
    pub fn class_of_place_difference(&self, p: &Place, o: &Place) -> Result<MumfordClass> {
        let pp = self.normalized.map_place(p)?;
        let oo = self.normalized.map_place(o)?;
        self.jac.place_difference(&pp, &oo)
    }

    /// `h=<int>; structure=Z/d1 x Z/d2 ...`
    pub fn summary(&self) -> String {
        format!("h={}; structure={}", self.order(), self.structure)
    }
}

impl fmt::Display for ClassGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(s: &str) -> CurveModel {
        CurveModel::parse(s).unwrap()
    }

    fn place(c: &CurveModel, l: &str) -> Place {
        c.place_by_label(l).unwrap()
    }

    #[test]
    fn example1_group() {
        let c = curve("q=2; h=x; f=x^5+x^3+x^2+x");
        let n = normalize_model(&c).unwrap();
        assert!(n.map.is_identity());
        let cg = enumerate_class_group(&c).unwrap();
        assert_eq!(cg.order(), 10);
        assert_eq!(cg.invariant_factors(), &[10]);
        let jac = cg.jacobian();
        let a = cg
            .class_of_place_difference(&place(&c, "P_{0}"), &place(&c, "P_inf"))
            .unwrap();
        assert_ne!(a, jac.identity());
        assert_eq!(jac.add(&a, &a), jac.identity());
        let o = place(&c, "P_{1,0}");
        assert_eq!(
            cg.class_of_place_difference(&o, &o).unwrap(),
            jac.identity()
        );
    }

    #[test]
    fn example2_group() {
        let c = curve("q=5; f=x^5-x^3+x");
        let cg = enumerate_class_group(&c).unwrap();
        assert_eq!(cg.invariant_factors(), &[8, 8]);
        assert_eq!(cg.summary(), "h=64; structure=Z/8 x Z/8");
        let o = place(&c, "P_{0}");
        let vecs: Vec<Vec<i64>> = ["P_inf", "P_{0}", "P_{4,3}", "P_{4,2}"]
            .iter()
            .map(|l| {
                cg.to_vector(&cg.class_of_place_difference(&place(&c, l), &o).unwrap())
                    .unwrap()
                    .to_vec()
            })
            .collect();
        let g = crate::abgroup::subgroup_generated(cg.structure(), &vecs).unwrap();
        assert_eq!(g.index(), 8);
    }

    #[test]
    fn normalization_moves_rational_root() {
        let c = curve("q=7; f=x^6+x^2+2*x+3");
        let roots = c.f().roots_in_field(c.field()).unwrap();
        let n = normalize_model(&c).unwrap();
        if roots.is_empty() {
            assert!(n.map.is_identity());
        } else {
            assert_eq!(n.model.f().deg(), 5);
        }
        for k in 1..=2 {
            assert_eq!(
                c.count_points_ext(k).unwrap(),
                n.model.count_points_ext(k).unwrap()
            );
        }
        // every original place has a distinct image
        let mut imgs: Vec<Place> = c
            .rational_places()
            .iter()
            .map(|p| n.map_place(p).unwrap())
            .collect();
        imgs.sort();
        imgs.dedup();
        assert_eq!(imgs.len(), c.rational_places().len());
    }

    #[test]
    fn even_models_have_full_groups() {
        // split and inert infinity without rational Weierstrass points
        for text in [
            "q=3; f=x^6+x^4+x^3+2*x+2",
            "q=5; f=x^6+x^2+x+2",
            "q=5; f=2*x^6+x^2+x+1",
            "q=7; f=3*x^6+x^2+2*x+1",
            "q=2; h=x^3+x+1; f=x^6+x",
            "q=2; h=x^3+x+1; f=x",
            "q=4; h=x^3+a; f=x^5+1",
        ] {
            let c = match CurveModel::parse(text) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let cg = enumerate_class_group(&c).unwrap_or_else(|e| panic!("{text}: {e}"));
            let jac = cg.jacobian();
            for x in cg.elements().iter().take(30) {
                assert!(jac.is_valid(x), "{text}");
                for y in cg.elements().iter().take(30) {
                    let s = jac.add(x, y);
                    let (vx, vy) = (cg.to_vector(x).unwrap(), cg.to_vector(y).unwrap());
                    assert_eq!(
                        cg.to_vector(&s).unwrap(),
                        cg.structure().add(vx, vy).as_slice(),
                        "{text}"
                    );
                }
                assert_eq!(jac.add(x, &jac.neg(x)), jac.identity());
            }
        }
    }

    #[test]
    fn mumford_text() {
        let c = curve("q=5; f=x^5-x^3+x");
        let cg = enumerate_class_group(&c).unwrap();
        let e = cg
            .class_of_place_difference(&place(&c, "P_{1,1}"), &place(&c, "P_inf"))
            .unwrap();
        assert_eq!(e.text(c.field(), false), "(x+4, 1)");
    }
}
