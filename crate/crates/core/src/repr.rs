//! Finite-dimensional representations, their graded tensor products,
//! transfer operators on spin chains and the Baxter polynomiality check.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::hopf::{coproduct_letter, gauss_current, Current};
use crate::matrix::{Legs, QMatrix};
use crate::report::{Check, Report};
use crate::rmatrix::evaluate_r;
use crate::scalars::{q_minus_qinv, qbracket, QScalar, Rational};
use crate::series::{expand_rational, LaurentSeries};
use crate::superalg::{phi_mode, Element, Letter, Monomial, PhiSign};

/// `q^{δ_i}` acts on a basis vector as `u_i q^{m_i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    pub u: [QScalar; 2],
    pub m: [i64; 2],
}

impl Weight {
    fn plain(m1: i64, m2: i64) -> Self {
        Weight {
            u: [QScalar::one(), QScalar::one()],
            m: [m1, m2],
        }
    }

    fn combine(&self, other: &Weight) -> Weight {
        Weight {
            u: [&self.u[0] * &other.u[0], &self.u[1] * &other.u[1]],
            m: [self.m[0] + other.m[0], self.m[1] + other.m[1]],
        }
    }
}

/// Which generators a representation is defined on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Full,
    /// The Borel half generated by `E_{n>=0}, F_{s>=1}, h_{s>0}, C_{s>0}, k_i^{±1}`.
    BorelA,
}

impl Domain {
    pub fn contains(self, l: Letter) -> bool {
        match self {
            Domain::Full => true,
            Domain::BorelA => match l {
                Letter::E(n) => n >= 0,
                Letter::F(s) => s >= 1,
                Letter::H(s) | Letter::C(s) => s > 0,
                Letter::K1(_) | Letter::K2(_) => true,
            },
        }
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Rho,
    PiA(QScalar),
    PiCd(QScalar, QScalar),
    Tensor(Box<Representation>, Box<Representation>),
}

#[derive(Clone, Debug)]
pub struct Representation {
    name: String,
    parity: Vec<u8>,
    weights: Vec<Weight>,
    domain: Domain,
    kind: Kind,
    overrides: BTreeMap<Letter, QMatrix>,
}

fn e(i: usize, j: usize) -> QMatrix {
    QMatrix::unit(2, i, j)
}

fn id2() -> QMatrix {
    QMatrix::identity(2)
}

fn rat(r: &Rational) -> QScalar {
    QScalar::from_rational(r)
}

/// The natural representation on `C^{1|1}`.
pub fn rep_rho() -> Representation {
    Representation {
        name: "rho".into(),
        parity: vec![0, 1],
        weights: vec![Weight::plain(1, 0), Weight::plain(0, -1)],
        domain: Domain::Full,
        kind: Kind::Rho,
        overrides: BTreeMap::new(),
    }
}

/// `π_a`, a representation of the Borel half only.
pub fn rep_pi_a(a: &Rational) -> Result<Representation> {
    if *a == Rational::from_integer(0.into()) {
        return Err(Error::OutsideDomain("a must be nonzero".into()));
    }
    Ok(Representation {
        name: format!("pi_a({a})"),
        parity: vec![0, 1],
        weights: vec![Weight::plain(0, 0), Weight::plain(-1, -1)],
        domain: Domain::BorelA,
        kind: Kind::PiA(rat(a)),
        overrides: BTreeMap::new(),
    })
}

/// `π_{c,d}`; `q^{δ_1}` carries the prefactor `c`.
pub fn rep_pi_cd(c: &Rational, d: &Rational) -> Result<Representation> {
    let zero = Rational::from_integer(0.into());
    let one = Rational::from_integer(1.into());
    if *c == zero || *d == zero || *c == one || *c == -one {
        return Err(Error::OutsideDomain(format!(
            "invalid parameters c = {c}, d = {d}"
        )));
    }
    let cq = rat(c);
    let w = |m: i64| Weight {
        u: [cq.clone(), QScalar::one()],
        m: [m, m],
    };
    Ok(Representation {
        name: format!("pi_cd({c},{d})"),
        parity: vec![0, 1],
        weights: vec![w(0), w(-1)],
        domain: Domain::Full,
        kind: Kind::PiCd(cq.clone(), rat(d)),
        overrides: BTreeMap::new(),
    })
}

/// `r1 ⊗ r2` acting through the coproduct.
pub fn tensor_rep(r1: &Representation, r2: &Representation) -> Representation {
    let mut parity = Vec::new();
    let mut weights = Vec::new();
    for (p1, w1) in r1.parity.iter().zip(&r1.weights) {
        for (p2, w2) in r2.parity.iter().zip(&r2.weights) {
            parity.push((p1 + p2) % 2);
            weights.push(w1.combine(w2));
        }
    }
    let domain = if r1.domain == Domain::Full && r2.domain == Domain::Full {
        Domain::Full
    } else {
        Domain::BorelA
    };
    Representation {
        name: format!("({} x {})", r1.name, r2.name),
        parity,
        weights,
        domain,
        kind: Kind::Tensor(Box::new(r1.clone()), Box::new(r2.clone())),
        overrides: BTreeMap::new(),
    }
}

impl Representation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn parity(&self) -> &[u8] {
        &self.parity
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Replaces the action of one letter (used for negative controls).
    pub fn with_override(mut self, l: Letter, m: QMatrix) -> Self {
        self.overrides.insert(l, m);
        self
    }

    /// Action of a single letter.
    pub fn act(&self, l: Letter) -> Result<QMatrix> {
        let l = l.validate()?;
        if let Some(m) = self.overrides.get(&l) {
            return Ok(m.clone());
        }
        if !self.domain.contains(l) {
            return Err(Error::OutsideBorel(format!(
                "{l} is not in the domain of {}",
                self.name
            )));
        }
        if let Letter::K1(x) | Letter::K2(x) = l {
            let i = if matches!(l, Letter::K1(_)) { 0 } else { 1 };
            let diag = self
                .weights
                .iter()
                .map(|w| (&w.u[i] * &QScalar::q_pow(w.m[i])).pow(x))
                .collect::<Vec<_>>();
            return Ok(QMatrix::diagonal(diag));
        }
        match &self.kind {
            Kind::Rho => Ok(rho_letter(l)),
            Kind::PiA(a) => Ok(pi_a_letter(a, l)),
            Kind::PiCd(c, d) => pi_cd_letter(c, d, l),
            Kind::Tensor(r1, r2) => {
                let mut out = QMatrix::zero(self.dim(), self.dim());
                for ((a, b), coef) in coproduct_letter(l).terms() {
                    let m = r1.act_monomial(a)?.super_kron(
                        &r1.parity,
                        &r2.act_monomial(b)?,
                        &r2.parity,
                    );
                    out = out.plus(&m.scaled(coef));
                }
                Ok(out)
            }
        }
    }

    pub fn act_monomial(&self, m: &Monomial) -> Result<QMatrix> {
        let mut acc = QMatrix::identity(self.dim());
        for l in m.letters() {
            acc = acc.times(&self.act(l)?);
        }
        Ok(acc)
    }

    pub fn act_element(&self, x: &Element) -> Result<QMatrix> {
        let mut out = QMatrix::zero(self.dim(), self.dim());
        for (m, c) in x.terms() {
            out = out.plus(&self.act_monomial(m)?.scaled(c));
        }
        Ok(out)
    }

    pub fn act_series(&self, s: &LaurentSeries<Element>) -> Result<LaurentSeries<QMatrix>> {
        s.try_map(|x| self.act_element(x))
    }
}

fn rho_letter(l: Letter) -> QMatrix {
    let t = q_minus_qinv();
    match l {
        Letter::E(n) => e(0, 1).scaled(&(&QScalar::q_pow(-2 * n - 1) * &t)),
        Letter::F(n) => e(1, 0).scaled(&(&QScalar::q_pow(-2 * n + 1) * &-&t)),
        Letter::C(s) => {
            let v = &(&QScalar::q_pow(-s) * &qbracket(s).expect("s != 0")) / &QScalar::from_int(-s);
            id2().scaled(&v)
        }
        Letter::H(s) => {
            let denom = &QScalar::from_int(s) * &t;
            let (a, b) = if s > 0 {
                (-QScalar::q_pow(-2 * s), QScalar::from_int(-1))
            } else {
                (QScalar::q_pow(-2 * s), QScalar::one())
            };
            // h_s = -(q^{-2s} E11 + E22)/(s(q - q^-1)) for s > 0 and
            // h_{-t} = (q^{2t} E11 + E22)/(t(q - q^-1)) for t > 0.
            let denom = if s > 0 { denom } else { -denom };
            e(0, 0)
                .scaled(&(&a / &denom))
                .plus(&e(1, 1).scaled(&(&b / &denom)))
        }
        Letter::K1(_) | Letter::K2(_) => unreachable!("handled by weights"),
    }
}

fn pi_a_letter(a: &QScalar, l: Letter) -> QMatrix {
    let t = q_minus_qinv();
    match l {
        Letter::E(n) => {
            if n == 0 {
                e(0, 1).scaled(&-&t)
            } else {
                QMatrix::zero(2, 2)
            }
        }
        Letter::F(s) => {
            if s == 1 {
                e(1, 0).scaled(a)
            } else {
                QMatrix::zero(2, 2)
            }
        }
        Letter::H(s) => id2().scaled(&(&a.pow(s) / &(&QScalar::from_int(s) * &t))),
        Letter::C(s) => id2().scaled(&-&(&a.pow(s) / &(&QScalar::from_int(s) * &t))),
        Letter::K1(_) | Letter::K2(_) => unreachable!("handled by weights"),
    }
}

fn pi_cd_letter(c: &QScalar, d: &QScalar, l: Letter) -> Result<QMatrix> {
    let t = q_minus_qinv();
    Ok(match l {
        Letter::E(n) => {
            let v = &(&-&t * &(&(d * &c.pow(2)) - d)) * &d.pow(n);
            e(0, 1).scaled(&v)
        }
        Letter::F(n) => e(1, 0).scaled(&(&(&d.inv()? * &c.inv()?) * &d.pow(n))),
        Letter::H(s) => {
            let pre = &d.pow(s) / &QScalar::from_int(s);
            let c2s = c.pow(2 * s);
            let a11 = &(&c2s - &QScalar::one()) / &t;
            let a22 = &(&c2s - &QScalar::q_pow(2 * s)) / &t;
            e(0, 0)
                .scaled(&(&pre * &a11))
                .plus(&e(1, 1).scaled(&(&pre * &a22)))
        }
        Letter::C(s) => {
            let pre = &d.pow(s) / &QScalar::from_int(s);
            let v = &(&c.pow(2 * s) - &QScalar::one()) / &t;
            id2().scaled(&-&(&pre * &v))
        }
        Letter::K1(_) | Letter::K2(_) => unreachable!("handled by weights"),
    })
}

/// A rational function of `z` with `Q(q)` coefficients, low degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalEntry {
    pub num: Vec<QScalar>,
    pub den: Vec<QScalar>,
}

impl RationalEntry {
    pub fn zero() -> Self {
        RationalEntry {
            num: vec![],
            den: vec![QScalar::one()],
        }
    }

    pub fn new(num: Vec<QScalar>, den: Vec<QScalar>) -> Self {
        RationalEntry { num, den }
    }

    pub fn poly(num: Vec<QScalar>) -> Self {
        RationalEntry {
            num,
            den: vec![QScalar::one()],
        }
    }

    pub fn neg(&self) -> Self {
        RationalEntry {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn taylor(&self, n: i64) -> Result<LaurentSeries<QScalar>> {
        expand_rational(&self.num, &self.den, n)
    }

    /// Value at `z = 0`.
    pub fn at_zero(&self) -> Result<QScalar> {
        let n = self.num.first().cloned().unwrap_or_default();
        n.checked_div(&self.den[0])
    }
}

/// A matrix of rational functions in `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalMatrix {
    pub dim: usize,
    pub entries: Vec<Vec<RationalEntry>>,
}

impl RationalMatrix {
    pub fn zero(dim: usize) -> Self {
        RationalMatrix {
            dim,
            entries: vec![vec![RationalEntry::zero(); dim]; dim],
        }
    }

    /// Taylor expansion through degree `n`, as a matrix series.
    pub fn taylor(&self, n: i64) -> Result<LaurentSeries<QMatrix>> {
        let mut coeffs = vec![QMatrix::zero(self.dim, self.dim); n as usize + 1];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let s = self.entries[i][j].taylor(n)?;
                for (k, c) in coeffs.iter_mut().enumerate() {
                    c.set(i, j, s.coeff(k as i64).unwrap_or_default());
                }
            }
        }
        Ok(LaurentSeries::truncated(0, coeffs))
    }

    pub fn at_zero(&self) -> Result<QMatrix> {
        let mut m = QMatrix::zero(self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, self.entries[i][j].at_zero()?);
            }
        }
        Ok(m)
    }

    /// Adds `f · (E_ij ⊗ E_kl)` in graded Kronecker form on `C^{1|1} ⊗ C^{1|1}`.
    pub fn add_super_unit(
        &mut self,
        (i, j): (usize, usize),
        (k, l): (usize, usize),
        f: RationalEntry,
    ) {
        let p = [0u8, 1];
        let odd = (p[k] + p[l]) * p[j] % 2 == 1;
        let f = if odd { f.neg() } else { f };
        self.entries[i * 2 + k][j * 2 + l] = f;
    }
}

fn s(x: i64) -> QScalar {
    QScalar::from_int(x)
}

/// The displayed matrices `(π(s_ij(z)))` of the shipped representations.
fn displayed_s_currents(r: &Representation) -> Option<[[RationalMatrix; 2]; 2]> {
    let q = QScalar::q;
    let qi = || QScalar::q_pow(-1);
    let t = q_minus_qinv();
    let diag = |a: RationalEntry, b: RationalEntry| {
        let mut m = RationalMatrix::zero(2);
        m.entries[0][0] = a;
        m.entries[1][1] = b;
        m
    };
    let off = |i: usize, j: usize, f: RationalEntry| {
        let mut m = RationalMatrix::zero(2);
        m.entries[i][j] = f;
        m
    };
    let p = RationalEntry::poly;
    match &r.kind {
        Kind::Rho => Some([
            [
                diag(p(vec![q(), -qi()]), p(vec![s(1), s(-1)])),
                off(0, 1, p(vec![t.clone()])),
            ],
            [
                off(1, 0, p(vec![s(0), t.clone()])),
                diag(p(vec![s(1), s(-1)]), p(vec![qi(), -q()])),
            ],
        ]),
        Kind::PiA(a) => {
            let den = vec![s(1), -a];
            let r = |num: Vec<QScalar>| RationalEntry::new(num, den.clone());
            Some([
                [diag(r(vec![s(1)]), r(vec![qi()])), off(0, 1, r(vec![-&t]))],
                [
                    off(1, 0, r(vec![s(0), -a])),
                    diag(p(vec![s(1)]), r(vec![qi(), -(a * &q())])),
                ],
            ])
        }
        Kind::PiCd(c, d) => {
            let c2 = c * c;
            let den = vec![s(1), -(d * &c2)];
            let r = |num: Vec<QScalar>| RationalEntry::new(num, den.clone());
            let e12 = &(c * &-&t) * &(&(d * &c2) - d);
            Some([
                [
                    diag(
                        r(vec![c.clone(), -(c * d)]),
                        r(vec![c * &qi(), -(&(c * d) * &q())]),
                    ),
                    off(0, 1, r(vec![e12])),
                ],
                [
                    off(1, 0, r(vec![s(0), s(-1)])),
                    diag(p(vec![s(1)]), r(vec![qi(), -(&(d * &c2) * &q())])),
                ],
            ])
        }
        Kind::Tensor(..) => None,
    }
}

fn letters_up_to(bound: i64, domain: Domain) -> Vec<Letter> {
    let mut out = vec![Letter::K1(1), Letter::K1(-1), Letter::K2(1), Letter::K2(-1)];
    for n in -bound..=bound {
        out.push(Letter::E(n));
        out.push(Letter::F(n));
        if n != 0 {
            out.push(Letter::H(n));
            out.push(Letter::C(n));
        }
    }
    out.into_iter().filter(|l| domain.contains(*l)).collect()
}

fn describe(name: &str, lhs: &QMatrix, rhs: &QMatrix) -> Option<String> {
    lhs.first_difference(rhs).map(|(i, j)| {
        format!(
            "{name}: entry ({i},{j}) is {} but expected {}",
            lhs.get(i, j),
            rhs.get(i, j)
        )
    })
}

fn check_relations(r: &Representation, bound: i64) -> Result<Vec<Check>> {
    let letters = letters_up_to(bound, r.domain);
    let act: BTreeMap<Letter, QMatrix> = letters
        .iter()
        .map(|&l| Ok((l, r.act(l)?)))
        .collect::<Result<_>>()?;
    let comm = |a: &QMatrix, b: &QMatrix| a.times(b).minus(&b.times(a));
    let anti = |a: &QMatrix, b: &QMatrix| a.times(b).plus(&b.times(a));
    let mut out = Vec::new();

    // k_i^e = diag(u_i q^{m_i})^e
    let mut w = None;
    for (i, l) in [(0usize, Letter::K1(1)), (1, Letter::K2(1))] {
        let expected = QMatrix::diagonal(
            r.weights
                .iter()
                .map(|w| &w.u[i] * &QScalar::q_pow(w.m[i]))
                .collect(),
        );
        w = w.or_else(|| describe(&format!("{l}"), &act[&l], &expected));
    }
    out.push(Check::from_witness("weights", w));

    let mut w = None;
    for (&x, mx) in &act {
        for (&y, my) in &act {
            if w.is_some() {
                break;
            }
            match (x, y) {
                (Letter::C(_), _) => {
                    w = describe(
                        &format!("[{x}, {y}]"),
                        &comm(mx, my),
                        &QMatrix::zero(r.dim(), r.dim()),
                    )
                }
                (Letter::H(_), Letter::H(_)) => {
                    w = describe(
                        &format!("[{x}, {y}]"),
                        &comm(mx, my),
                        &QMatrix::zero(r.dim(), r.dim()),
                    )
                }
                _ => {}
            }
        }
    }
    out.push(Check::from_witness("D2", w));

    let mut w = None;
    for (&x, mx) in &act {
        let Letter::H(s) = x else { continue };
        let k = &(&QScalar::q_pow(s) * &qbracket(s)?) / &QScalar::from_int(s);
        for (&y, my) in &act {
            if w.is_some() {
                break;
            }
            let (target, sign) = match y {
                Letter::E(n) => (Letter::E(n + s), 1),
                Letter::F(n) => (Letter::F(n + s), -1),
                _ => continue,
            };
            if !r.domain.contains(target) {
                continue;
            }
            let rhs = r.act(target)?.scaled(&(&k * &QScalar::from_int(sign)));
            w = describe(&format!("[{x}, {y}]"), &comm(mx, my), &rhs);
        }
    }
    out.push(Check::from_witness("D3", w));

    let mut w = None;
    for (&x, mx) in &act {
        let Letter::E(m) = x else { continue };
        for (&y, my) in &act {
            if w.is_some() {
                break;
            }
            let Letter::F(n) = y else { continue };
            let k = m + n;
            let mut phi = Element::zero();
            if k >= 0 {
                phi = phi.plus(&phi_mode(PhiSign::Plus, k));
            }
            if k <= 0 {
                phi = phi.minus(&phi_mode(PhiSign::Minus, -k));
            }
            let rhs = r.act_element(&phi)?.scaled(&q_minus_qinv());
            w = describe(&format!("[{x}, {y}]"), &anti(mx, my), &rhs);
        }
    }
    out.push(Check::from_witness("D4", w));

    let mut w = None;
    let zero = QMatrix::zero(r.dim(), r.dim());
    for (&x, mx) in &act {
        for (&y, my) in &act {
            if w.is_some() {
                break;
            }
            let same = matches!(
                (x, y),
                (Letter::E(_), Letter::E(_)) | (Letter::F(_), Letter::F(_))
            );
            if same {
                w = describe(&format!("[{x}, {y}]"), &anti(mx, my), &zero);
            }
        }
    }
    out.push(Check::from_witness("D5", w));

    let mut w = None;
    for k in [Letter::K1(1), Letter::K2(1)] {
        let kinv = if let Letter::K1(_) = k {
            Letter::K1(-1)
        } else {
            Letter::K2(-1)
        };
        for (&y, my) in &act {
            if w.is_some() {
                break;
            }
            let expected = my.scaled(&QScalar::q_pow(y.q_degree()));
            w = describe(
                &format!("{k} {y} {kinv}"),
                &act[&k].times(my).times(&act[&kinv]),
                &expected,
            );
        }
    }
    out.push(Check::from_witness("Q-grading", w));
    Ok(out)
}

fn check_currents(r: &Representation, order: i64) -> Result<Option<Check>> {
    let Some(display) = displayed_s_currents(r) else {
        return Ok(None);
    };
    let ids = [[Current::S11, Current::S12], [Current::S21, Current::S22]];
    for i in 0..2 {
        for j in 0..2 {
            let computed = r.act_series(&gauss_current(ids[i][j], order)?)?;
            let expected = display[i][j].taylor(order)?;
            if let Some(k) = computed.first_difference(&expected) {
                return Ok(Some(Check::fail(
                    "gauss-currents",
                    format!("s{}{} differs at z^{k}", i + 1, j + 1),
                )));
            }
        }
    }
    Ok(Some(Check::pass("gauss-currents")))
}

/// Checks the defining relations on all generator instances with indices
/// up to `bound`, and the displayed current matrices where available.
pub fn rep_check(r: &Representation, bound: i64) -> Report {
    let mut report = Report::new("rep-check", bound).param("representation", r.name.clone());
    match check_relations(r, bound) {
        Ok(cs) => cs.into_iter().for_each(|c| report.push(c)),
        Err(e) => report.push(Check::error("relations", e.to_string())),
    }
    match check_currents(r, 8) {
        Ok(Some(c)) => report.push(c),
        Ok(None) => {}
        Err(e) => report.push(Check::error("gauss-currents", e.to_string())),
    }
    report
}

/// `f_{c,d}(z) = exp(sum_{s>0} (q^s + q^-s)(c^{-2s} - 1) d^{-s} / (s (q^s - q^-s)) z^s)`.
pub fn f_series(c: &Rational, d: &Rational, n: i64) -> Result<LaurentSeries<QScalar>> {
    let (c, d) = (rat(c), rat(d));
    let mut coeffs = vec![QScalar::zero()];
    for s in 1..=n {
        let num = &(&(&QScalar::q_pow(s) + &QScalar::q_pow(-s))
            * &(&c.pow(-2 * s) - &QScalar::one()))
            * &d.pow(-s);
        let den = &QScalar::from_int(s) * &(&QScalar::q_pow(s) - &QScalar::q_pow(-s));
        coeffs.push(num.checked_div(&den)?);
    }
    LaurentSeries::truncated(0, coeffs).exp_commuting(n)
}

/// The six-term matrix `R_{c,d}(z)` in graded Kronecker form.
pub fn rcd_matrix(c: &Rational, d: &Rational) -> Result<RationalMatrix> {
    let (c, d) = (rat(c), rat(d));
    let dinv = d.inv()?;
    let den = vec![QScalar::one(), -&dinv];
    let r = |num: Vec<QScalar>| RationalEntry::new(num, den.clone());
    let mut m = RationalMatrix::zero(4);
    m.add_super_unit((0, 0), (0, 0), RationalEntry::poly(vec![QScalar::one()]));
    m.add_super_unit((0, 0), (1, 1), r(vec![QScalar::one()]));
    m.add_super_unit((1, 1), (0, 0), r(vec![c.clone(), -&(&dinv * &c.inv()?)]));
    m.add_super_unit((1, 1), (1, 1), r(vec![c.clone()]));
    m.add_super_unit((0, 1), (1, 0), r(vec![&dinv * &c.inv()?]));
    m.add_super_unit(
        (1, 0),
        (0, 1),
        r(vec![QScalar::zero(), &QScalar::one() - &(&c * &c)]),
    );
    Ok(m)
}

/// `T(z) = exp(sum_{s>0} z^s (q^-s C_{-s} - q^s h_{-s}) / [s])`.
pub fn t_series(n: i64) -> Result<LaurentSeries<Element>> {
    let mut coeffs = vec![Element::zero()];
    for s in 1..=n {
        let inv = qbracket(s)?.inv()?;
        let x = Element::c(-s)
            .scaled(&QScalar::q_pow(-s))
            .minus(&Element::h(-s).scaled(&QScalar::q_pow(s)));
        coeffs.push(x.scaled(&inv));
    }
    LaurentSeries::truncated(0, coeffs).exp_commuting(n)
}

/// The blocks `A_ij(z)` of `(π_a ⊗ π_{c,d} chain)(R(z)) = sum E_ij ⊗ A_ij(az)`.
#[derive(Clone, Debug)]
pub struct TransferOps {
    pub a: [[LaurentSeries<QMatrix>; 2]; 2],
    /// Parities of the chain basis.
    pub parity: Vec<u8>,
    /// Number of `v_1` factors in each chain basis vector.
    pub v1_count: Vec<usize>,
}

/// The chain representation `π_{c_1,d_1} ⊗ ... ⊗ π_{c_n,d_n}` (left-nested).
pub fn chain_rep(chain: &[(Rational, Rational)]) -> Result<Representation> {
    let mut it = chain.iter();
    let (c, d) = it
        .next()
        .ok_or_else(|| Error::Invalid("empty chain".into()))?;
    let mut w = rep_pi_cd(c, d)?;
    for (c, d) in it {
        w = tensor_rep(&w, &rep_pi_cd(c, d)?);
    }
    Ok(w)
}

/// `(π_a ⊗ W)(R(z))` as the ordered product `R_{0,n} ... R_{0,1}`.
pub fn chain_r_matrix(
    a: &Rational,
    chain: &[(Rational, Rational)],
    n: i64,
) -> Result<LaurentSeries<QMatrix>> {
    if chain.is_empty() {
        return Err(Error::Invalid("empty chain".into()));
    }
    let pa = rep_pi_a(a)?;
    let mut legs = vec![pa.parity.clone()];
    let mut sites = Vec::new();
    for (c, d) in chain {
        let r = rep_pi_cd(c, d)?;
        legs.push(r.parity.clone());
        sites.push(r);
    }
    let legs = Legs::new(legs);
    let mut acc: Option<LaurentSeries<QMatrix>> = None;
    for (j, site) in sites.iter().enumerate().rev() {
        let r0j = evaluate_r(&pa, site, n)?.map(|m| legs.embed_pair(m, 0, j + 1));
        acc = Some(match acc {
            None => r0j,
            Some(prev) => prev.mul(&r0j)?,
        });
    }
    Ok(acc.expect("nonempty chain"))
}

/// Splits a matrix on `V ⊗ W` into the four blocks with respect to the
/// graded Kronecker form `sum E_ij ⊗ A_ij`.
fn blocks(m: &QMatrix, pw: &[u8]) -> [[QMatrix; 2]; 2] {
    let dw = pw.len();
    let p = [0u8, 1];
    let block = |i: usize, j: usize| {
        QMatrix::from_fn(dw, dw, |k, l| {
            let x = m.get(i * dw + k, j * dw + l).clone();
            if (pw[k] + pw[l]) * p[j] % 2 == 1 {
                -x
            } else {
                x
            }
        })
    };
    [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]]
}

pub fn transfer_ops(a: &Rational, chain: &[(Rational, Rational)], n: i64) -> Result<TransferOps> {
    let full = chain_r_matrix(a, chain, n)?;
    let w = chain_rep(chain)?;
    let pw = w.parity.clone();
    let ainv = rat(a).inv()?;
    let mut out: Vec<Vec<Vec<QMatrix>>> = vec![vec![Vec::new(); 2]; 2];
    for k in 0..=n {
        let scale = ainv.pow(k);
        let b = blocks(&full.coeff(k).expect("within window"), &pw);
        for i in 0..2 {
            for j in 0..2 {
                out[i][j].push(b[i][j].scaled(&scale));
            }
        }
    }
    let series = |v: Vec<QMatrix>| LaurentSeries::truncated(0, v);
    let [[a11, a12], [a21, a22]] = [
        [
            std::mem::take(&mut out[0][0]),
            std::mem::take(&mut out[0][1]),
        ],
        [
            std::mem::take(&mut out[1][0]),
            std::mem::take(&mut out[1][1]),
        ],
    ];
    let v1_count = (0..w.dim())
        .map(|idx| {
            let mut count = 0;
            let mut rest = idx;
            for _ in 0..chain.len() {
                if rest % 2 == 0 {
                    count += 1;
                }
                rest /= 2;
            }
            count
        })
        .collect();
    Ok(TransferOps {
        a: [[series(a11), series(a12)], [series(a21), series(a22)]],
        parity: pw,
        v1_count,
    })
}

/// Checks that `A_11`, `A_22` preserve every `W_m` and that
/// `prod_j (1 - z/d_j)/f_{c_j,d_j}(z) · A_ii(z)|_{W_m}` has no terms of
/// degree `m+1..=n`. With `normalize = false` the prefactor is omitted.
pub fn baxter_check(
    a: &Rational,
    chain: &[(Rational, Rational)],
    n: i64,
    normalize: bool,
) -> Report {
    let mut report = Report::new("baxter", n)
        .param("a", a.to_string())
        .param(
            "chain",
            chain
                .iter()
                .map(|(c, d)| format!("({c},{d})"))
                .collect::<Vec<_>>()
                .join(";"),
        )
        .param("normalized", normalize);
    let ops = match transfer_ops(a, chain, n) {
        Ok(o) => o,
        Err(e) => {
            report.push(Check::error("transfer-ops", e.to_string()));
            return report;
        }
    };
    let sites = chain.len();
    let subspaces: Vec<Vec<usize>> = (0..=sites)
        .map(|m| {
            (0..ops.v1_count.len())
                .filter(|&v| ops.v1_count[v] == m)
                .collect()
        })
        .collect();

    let mut w = None;
    for i in 0..2 {
        for k in 0..=n {
            let c = ops.a[i][i].coeff(k).expect("within window");
            for r in 0..c.rows() {
                for col in 0..c.cols() {
                    if ops.v1_count[r] != ops.v1_count[col]
                        && !c.get(r, col).is_zero()
                        && w.is_none()
                    {
                        w = Some(format!(
                            "A{0}{0} mixes W-subspaces at z^{k}, entry ({r},{col})",
                            i + 1
                        ));
                    }
                }
            }
        }
    }
    report.push(Check::from_witness("W_m stability", w));

    let prefactor = || -> Result<LaurentSeries<QScalar>> {
        let mut p = LaurentSeries::exact(0, vec![QScalar::one()]);
        for (c, d) in chain {
            let lin = LaurentSeries::exact(0, vec![QScalar::one(), -rat(d).inv()?]);
            let finv = f_series(c, d, n)?.invert(n)?;
            p = p.mul(&lin)?.mul(&finv)?;
        }
        p.truncate(n)
    };
    let p = if normalize {
        match prefactor() {
            Ok(p) => p,
            Err(e) => {
                report.push(Check::error("prefactor", e.to_string()));
                return report;
            }
        }
    } else {
        LaurentSeries::exact(0, vec![QScalar::one()])
    };
    for (m, basis) in subspaces.iter().enumerate() {
        for i in 0..2 {
            let name = format!("A{0}{0} on W_{m}", i + 1);
            let restricted = ops.a[i][i].map(|x| x.restrict(basis, basis));
            let scaled = (0..=n)
                .map(|k| {
                    let mut acc = QMatrix::zero(basis.len(), basis.len());
                    for j in 0..=k {
                        let pj = p.coeff(j).unwrap_or_default();
                        if !pj.is_zero() {
                            acc = acc
                                .plus(&restricted.coeff(k - j).expect("within window").scaled(&pj));
                        }
                    }
                    acc
                })
                .collect::<Vec<_>>();
            let bad = ((m as i64 + 1)..=n).find(|&k| !scaled[k as usize].is_zero_matrix());
            report.push(Check::from_witness(
                name,
                bad.map(|k| format!("degree {k} coefficient is nonzero (degree bound {m})")),
            ));
        }
    }
    report
}

/// Relates `A_11(z)` to `π_W(T(z))`: returns the series `A_11 · π_W(T)^{-1}`
/// when it is a scalar multiple of the identity in every degree.
pub fn a11_over_t(
    a: &Rational,
    chain: &[(Rational, Rational)],
    n: i64,
) -> Result<Option<LaurentSeries<QScalar>>> {
    let ops = transfer_ops(a, chain, n)?;
    let w = chain_rep(chain)?;
    let t = w.act_series(&t_series(n)?)?;
    let ratio = ops.a[0][0].mul(&t.invert(n)?)?;
    let mut coeffs = Vec::new();
    for k in 0..=n {
        let m = ratio.coeff(k).expect("within window");
        let c = m.get(0, 0).clone();
        if m != QMatrix::identity(m.rows()).scaled(&c) {
            return Ok(None);
        }
        coeffs.push(c);
    }
    Ok(Some(LaurentSeries::truncated(0, coeffs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_rational;

    fn r(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn rho_examples() {
        let rho = rep_rho();
        let e0 = rho.act(Letter::E(0)).unwrap();
        assert_eq!(*e0.get(0, 1), &QScalar::q_pow(-1) * &q_minus_qinv());
        let c2 = rho.act(Letter::C(2)).unwrap();
        let v = &(&QScalar::q_pow(-2) * &qbracket(2).unwrap()) * &QScalar::from_ratio(-1, 2);
        assert_eq!(c2, QMatrix::identity(2).scaled(&v));
    }

    #[test]
    fn pi_a_examples() {
        let p = rep_pi_a(&r("2")).unwrap();
        assert!(p.act(Letter::E(1)).unwrap().is_zero_matrix());
        let h2 = p.act(Letter::H(2)).unwrap();
        assert_eq!(
            *h2.get(0, 0),
            &QScalar::from_int(4) / &(&QScalar::from_int(2) * &q_minus_qinv())
        );
        assert_eq!(
            *p.act(Letter::F(1)).unwrap().get(1, 0),
            QScalar::from_int(2)
        );
        assert!(matches!(p.act(Letter::E(-1)), Err(Error::OutsideBorel(_))));
    }

    #[test]
    fn pi_cd_examples() {
        let p = rep_pi_cd(&r("2"), &r("3")).unwrap();
        let phi0 = p.act_element(&phi_mode(PhiSign::Plus, 0)).unwrap();
        assert_eq!(
            phi0,
            QMatrix::identity(2).scaled(&QScalar::from_ratio(1, 2))
        );
        let c1 = p.act(Letter::C(1)).unwrap();
        assert_eq!(*c1.get(1, 1), &QScalar::from_int(-9) / &q_minus_qinv());
        let e1 = p.act(Letter::E(1)).unwrap();
        assert_eq!(
            *e1.get(0, 1),
            &(&-q_minus_qinv() * &QScalar::from_int(9)) * &QScalar::from_int(3)
        );
        assert!(rep_pi_cd(&r("1"), &r("3")).is_err());
    }

    #[test]
    fn shipped_representations_pass_rep_check() {
        let reps = vec![
            rep_rho(),
            rep_pi_a(&r("1")).unwrap(),
            rep_pi_a(&r("2")).unwrap(),
            rep_pi_cd(&r("2"), &r("3")).unwrap(),
        ];
        for rep in reps {
            let report = rep_check(&rep, 3);
            assert!(report.passed(), "{}", report.to_text());
        }
    }

    #[test]
    fn corrupted_rho_fails_d4() {
        let rho = rep_rho();
        let bad = rho.act(Letter::E(0)).unwrap().scaled(&QScalar::from_int(2));
        let report = rep_check(&rho.with_override(Letter::E(0), bad), 3);
        let d4 = report.checks.iter().find(|c| c.name == "D4").unwrap();
        assert_eq!(d4.status, crate::report::Status::Fail);
    }

    #[test]
    fn tensor_rep_examples() {
        let a = rep_pi_cd(&r("2"), &r("3")).unwrap();
        let b = rep_pi_cd(&r("5"), &r("7")).unwrap();
        let t = tensor_rep(&a, &b);
        assert_eq!(t.dim(), 4);
        let ca = a.act(Letter::C(1)).unwrap().get(0, 0).clone();
        let cb = b.act(Letter::C(1)).unwrap().get(0, 0).clone();
        assert_eq!(
            t.act(Letter::C(1)).unwrap(),
            QMatrix::identity(4).scaled(&(&ca + &cb))
        );
        assert!(rep_check(&t, 2).passed());
    }

    #[test]
    fn f_series_examples() {
        let f = f_series(&r("2"), &r("3"), 3).unwrap();
        assert!(f.coeff(0).unwrap().is_one());
        let expected = &(&(&QScalar::q() + &QScalar::q_pow(-1)) * &QScalar::from_ratio(-3, 4))
            * &(&QScalar::from_ratio(1, 3) / &q_minus_qinv());
        assert_eq!(f.coeff(1).unwrap(), expected);
        let f1 = f_series(&r("1"), &r("3"), 3).unwrap();
        assert!((1..=3).all(|k| f1.coeff(k).unwrap().is_zero()));
    }

    #[test]
    fn rcd_examples() {
        let m = rcd_matrix(&r("2"), &r("3")).unwrap();
        let z0 = m.at_zero().unwrap();
        assert!(z0.get(0, 0).is_one());
        assert_eq!(*z0.get(3, 3), QScalar::from_int(2));
        assert_eq!(*z0.get(2, 2), QScalar::from_int(2));
        assert!(z0.get(1, 1).is_one());
        // E_12 ⊗ E_21 sits at row v1v2, column v2v1 with the graded sign
        assert_eq!(*z0.get(1, 2), QScalar::from_ratio(-1, 6));
    }

    #[test]
    fn t_series_examples() {
        let t = t_series(2).unwrap();
        assert_eq!(t.coeff(0).unwrap(), Element::one());
        let expected = Element::c(-1)
            .scaled(&QScalar::q_pow(-1))
            .minus(&Element::h(-1).scaled(&QScalar::q()));
        assert_eq!(t.coeff(1).unwrap(), expected);
    }
}
