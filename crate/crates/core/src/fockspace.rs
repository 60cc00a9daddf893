//! Occupation-number states for the sp model and fermionic/bosonic ladder
//! operators.
//!
//! Fermionic modes are ordered canonically as
//! `1s↑, 1s↓, 2p₋₁↑, 2p₋₁↓, 2p₀↑, 2p₀↓, 2p₁↑, 2p₁↓` followed by the two
//! photoelectron modes `c↑, c↓`. A basis state is the product of creation
//! operators in ascending mode order acting on the vacuum, so creating mode
//! `k` picks up `(-1)^(number of occupied modes below k)`.
//!
//! Photon modes (incident `a`, emitted `b_λ1`, `b_λ2`) are bosonic and
//! commute with everything else.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    /// Twice the spin projection, `+1` or `-1`.
    pub fn twice_ms(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "up",
            Spin::Down => "down",
        })
    }
}

/// Linear polarization mode of the emitted photon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    Lambda1,
    Lambda2,
}

impl Polarization {
    pub const ALL: [Polarization; 2] = [Polarization::Lambda1, Polarization::Lambda2];

    pub fn index(self) -> usize {
        match self {
            Polarization::Lambda1 => 0,
            Polarization::Lambda2 => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shell {
    S1s,
    P2p,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinOrbital {
    pub shell: Shell,
    pub m: i8,
    pub spin: Spin,
}

impl SpinOrbital {
    pub const fn s(spin: Spin) -> Self {
        SpinOrbital { shell: Shell::S1s, m: 0, spin }
    }

    /// 2p orbital; `m` must lie in `-1..=1`.
    pub fn p(m: i8, spin: Spin) -> Self {
        assert!((-1..=1).contains(&m), "2p magnetic quantum number out of range: {m}");
        SpinOrbital { shell: Shell::P2p, m, spin }
    }

    /// All eight spin-orbitals in canonical order.
    pub fn all() -> [SpinOrbital; 8] {
        let mut out = [SpinOrbital::s(Spin::Up); 8];
        out[1] = SpinOrbital::s(Spin::Down);
        let mut k = 2;
        for m in -1..=1 {
            for spin in Spin::ALL {
                out[k] = SpinOrbital::p(m, spin);
                k += 1;
            }
        }
        out
    }

    pub fn index(self) -> usize {
        match self.shell {
            Shell::S1s => self.spin.index(),
            Shell::P2p => 2 + 2 * (self.m + 1) as usize + self.spin.index(),
        }
    }
}

impl fmt::Display for SpinOrbital {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.spin {
            Spin::Up => "↑",
            Spin::Down => "↓",
        };
        match self.shell {
            Shell::S1s => write!(f, "1s{arrow}"),
            Shell::P2p => write!(f, "2p({}){arrow}", self.m),
        }
    }
}

/// Any single-particle mode of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Orbital(SpinOrbital),
    Photoelectron(Spin),
    Incident,
    Emitted(Polarization),
}

impl From<SpinOrbital> for Mode {
    fn from(o: SpinOrbital) -> Self {
        Mode::Orbital(o)
    }
}

impl Mode {
    fn fermion_bit(self) -> Option<u32> {
        match self {
            Mode::Orbital(o) => Some(o.index() as u32),
            Mode::Photoelectron(s) => Some(8 + s.index() as u32),
            Mode::Incident | Mode::Emitted(_) => None,
        }
    }
}

const ORBITAL_MASK: u16 = 0x00ff;

/// Occupation-number basis state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState {
    fermions: u16,
    incident: u8,
    emitted: [u8; 2],
}

impl FockState {
    pub const VACUUM: FockState = FockState { fermions: 0, incident: 0, emitted: [0, 0] };

    /// Builds a state from occupied modes. Returns `None` if a fermionic mode
    /// is listed twice.
    pub fn from_modes<I: IntoIterator<Item = Mode>>(modes: I) -> Option<FockState> {
        let mut state = FockState::VACUUM;
        for mode in modes {
            match mode.fermion_bit() {
                Some(bit) => {
                    if state.fermions & (1 << bit) != 0 {
                        return None;
                    }
                    state.fermions |= 1 << bit;
                }
                None => *state.photons_mut(mode) += 1,
            }
        }
        Some(state)
    }

    /// Bitset over the eight spin-orbitals in canonical order.
    pub fn occupation(&self) -> u8 {
        (self.fermions & ORBITAL_MASK) as u8
    }

    pub fn is_occupied(&self, orb: SpinOrbital) -> bool {
        self.fermions & (1 << orb.index()) != 0
    }

    pub fn photoelectron(&self) -> Option<Spin> {
        Spin::ALL.into_iter().find(|s| self.fermions & (1 << (8 + s.index())) != 0)
    }

    pub fn incident_photons(&self) -> u8 {
        self.incident
    }

    pub fn emitted_photons(&self, pol: Polarization) -> u8 {
        self.emitted[pol.index()]
    }

    pub fn count_in_shell(&self, shell: Shell) -> u32 {
        SpinOrbital::all()
            .into_iter()
            .filter(|o| o.shell == shell && self.is_occupied(*o))
            .count() as u32
    }

    fn photons_mut(&mut self, mode: Mode) -> &mut u8 {
        match mode {
            Mode::Incident => &mut self.incident,
            Mode::Emitted(p) => &mut self.emitted[p.index()],
            _ => unreachable!("not a photon mode"),
        }
    }

    fn photons(&self, mode: Mode) -> u8 {
        match mode {
            Mode::Incident => self.incident,
            Mode::Emitted(p) => self.emitted[p.index()],
            _ => unreachable!("not a photon mode"),
        }
    }

    /// Applies a creation operator; `None` if the result vanishes.
    pub fn create(&self, mode: Mode) -> Option<(f64, FockState)> {
        let mut next = *self;
        match mode.fermion_bit() {
            Some(bit) => {
                if self.fermions & (1 << bit) != 0 {
                    return None;
                }
                next.fermions |= 1 << bit;
                Some((self.fermion_sign(bit), next))
            }
            None => {
                let n = self.photons(mode);
                *next.photons_mut(mode) = n.checked_add(1)?;
                Some((f64::from(n + 1).sqrt(), next))
            }
        }
    }

    /// Applies an annihilation operator; `None` if the result vanishes.
    pub fn annihilate(&self, mode: Mode) -> Option<(f64, FockState)> {
        let mut next = *self;
        match mode.fermion_bit() {
            Some(bit) => {
                if self.fermions & (1 << bit) == 0 {
                    return None;
                }
                next.fermions &= !(1 << bit);
                Some((self.fermion_sign(bit), next))
            }
            None => {
                let n = self.photons(mode);
                if n == 0 {
                    return None;
                }
                *next.photons_mut(mode) = n - 1;
                Some((f64::from(n).sqrt(), next))
            }
        }
    }

    fn fermion_sign(&self, bit: u32) -> f64 {
        let below = self.fermions & ((1u16 << bit) - 1);
        if below.count_ones() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = SpinOrbital::all()
            .into_iter()
            .filter(|o| self.is_occupied(*o))
            .map(|o| o.to_string())
            .collect();
        for s in Spin::ALL {
            if self.fermions & (1 << (8 + s.index())) != 0 {
                parts.push(format!("c{s}"));
            }
        }
        if self.incident > 0 {
            parts.push(format!("a^{}", self.incident));
        }
        for p in Polarization::ALL {
            if self.emitted[p.index()] > 0 {
                parts.push(format!("b{}^{}", p.index() + 1, self.emitted[p.index()]));
            }
        }
        write!(f, "|{}>", parts.join(" "))
    }
}

/// Sparse superposition of Fock states.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ManyBodyVector {
    terms: BTreeMap<FockState, C64>,
}

impl ManyBodyVector {
    pub fn zero() -> Self {
        ManyBodyVector::default()
    }

    pub fn vacuum() -> Self {
        ManyBodyVector::basis(FockState::VACUUM)
    }

    pub fn basis(state: FockState) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(state, C64::new(1.0, 0.0));
        ManyBodyVector { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (FockState, C64)>>(terms: I) -> Self {
        let mut v = ManyBodyVector::zero();
        for (s, a) in terms {
            v.add_term(s, a);
        }
        v
    }

    pub fn add_term(&mut self, state: FockState, amplitude: C64) {
        let entry = self.terms.entry(state).or_insert(C64::new(0.0, 0.0));
        *entry += amplitude;
        if *entry == C64::new(0.0, 0.0) {
            self.terms.remove(&state);
        }
    }

    pub fn amplitude(&self, state: &FockState) -> C64 {
        self.terms.get(state).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockState, &C64)> {
        self.terms.iter()
    }

    /// Number of basis states with a nonzero coefficient.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn create(&self, mode: impl Into<Mode>) -> ManyBodyVector {
        self.ladder(Ladder::Create(mode.into()))
    }

    pub fn annihilate(&self, mode: impl Into<Mode>) -> ManyBodyVector {
        self.ladder(Ladder::Annihilate(mode.into()))
    }

    fn ladder(&self, op: Ladder) -> ManyBodyVector {
        let mut out = ManyBodyVector::zero();
        for (state, amp) in &self.terms {
            let hit = match op {
                Ladder::Create(m) => state.create(m),
                Ladder::Annihilate(m) => state.annihilate(m),
            };
            if let Some((factor, next)) = hit {
                out.add_term(next, amp * factor);
            }
        }
        out
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ManyBodyVector) -> C64 {
        self.terms
            .iter()
            .filter_map(|(s, a)| other.terms.get(s).map(|b| a.conj() * b))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, factor: C64) -> ManyBodyVector {
        ManyBodyVector::from_terms(self.terms.iter().map(|(s, a)| (*s, a * factor)))
    }

    /// Largest absolute amplitude difference to `other`.
    pub fn max_deviation(&self, other: &ManyBodyVector) -> f64 {
        let diff = self.clone() + other.scale(C64::new(-1.0, 0.0));
        diff.terms.values().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

impl Add for ManyBodyVector {
    type Output = ManyBodyVector;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for ManyBodyVector {
    fn add_assign(&mut self, rhs: Self) {
        for (s, a) in rhs.terms {
            self.add_term(s, a);
        }
    }
}

pub fn create(state: &ManyBodyVector, orb: SpinOrbital) -> ManyBodyVector {
    state.create(orb)
}

pub fn annihilate(state: &ManyBodyVector, orb: SpinOrbital) -> ManyBodyVector {
    state.annihilate(orb)
}

pub fn inner(a: &ManyBodyVector, b: &ManyBodyVector) -> C64 {
    a.inner(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Create(Mode),
    Annihilate(Mode),
}

impl Ladder {
    fn adjoint(self) -> Ladder {
        match self {
            Ladder::Create(m) => Ladder::Annihilate(m),
            Ladder::Annihilate(m) => Ladder::Create(m),
        }
    }
}

/// A linear combination of products of ladder operators.
///
/// Each product is written left to right as in operator notation, so the
/// rightmost factor acts first.
#[derive(Clone, Debug, Default)]
pub struct Operator {
    terms: Vec<(C64, Vec<Ladder>)>,
}

impl Operator {
    pub fn zero() -> Self {
        Operator::default()
    }

    pub fn identity() -> Self {
        Operator { terms: vec![(C64::new(1.0, 0.0), Vec::new())] }
    }

    pub fn product(coefficient: impl Into<C64>, factors: Vec<Ladder>) -> Self {
        Operator { terms: vec![(coefficient.into(), factors)] }
    }

    /// `c†_to c_from`.
    pub fn hop(coefficient: impl Into<C64>, to: impl Into<Mode>, from: impl Into<Mode>) -> Self {
        Operator::product(coefficient, vec![Ladder::Create(to.into()), Ladder::Annihilate(from.into())])
    }

    pub fn number(mode: impl Into<Mode>) -> Self {
        let mode = mode.into();
        Operator::hop(1.0, mode, mode)
    }

    pub fn terms(&self) -> usize {
        self.terms.len()
    }

    pub fn apply(&self, v: &ManyBodyVector) -> ManyBodyVector {
        let mut out = ManyBodyVector::zero();
        for (coef, factors) in &self.terms {
            if *coef == C64::new(0.0, 0.0) {
                continue;
            }
            let mut w = v.clone();
            for op in factors.iter().rev() {
                w = w.ladder(*op);
                if w.is_zero() {
                    break;
                }
            }
            out += w.scale(*coef);
        }
        out
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            terms: self
                .terms
                .iter()
                .map(|(c, f)| (c.conj(), f.iter().rev().map(|l| l.adjoint()).collect()))
                .collect(),
        }
    }

    /// Operator product `self · rhs`.
    pub fn compose(&self, rhs: &Operator) -> Operator {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (a, fa) in &self.terms {
            for (b, fb) in &rhs.terms {
                let mut f = fa.clone();
                f.extend_from_slice(fb);
                terms.push((a * b, f));
            }
        }
        Operator { terms }
    }

    /// Matrix `⟨basis_i| O |basis_j⟩`.
    pub fn matrix(&self, basis: &[FockState]) -> DMatrix<C64> {
        let n = basis.len();
        let mut m = DMatrix::zeros(n, n);
        for (j, bj) in basis.iter().enumerate() {
            let image = self.apply(&ManyBodyVector::basis(*bj));
            for (i, bi) in basis.iter().enumerate() {
                m[(i, j)] = image.amplitude(bi);
            }
        }
        m
    }

    /// `⟨a| O |b⟩`.
    pub fn element(&self, a: &ManyBodyVector, b: &ManyBodyVector) -> C64 {
        a.inner(&self.apply(b))
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(mut self, rhs: Operator) -> Operator {
        self.terms.extend(rhs.terms);
        self
    }
}

impl AddAssign for Operator {
    fn add_assign(&mut self, rhs: Operator) {
        self.terms.extend(rhs.terms);
    }
}

impl Mul<C64> for Operator {
    type Output = Operator;
    fn mul(mut self, rhs: C64) -> Operator {
        for (c, _) in &mut self.terms {
            *c *= rhs;
        }
        self
    }
}

impl Mul<f64> for Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self * C64::new(rhs, 0.0)
    }
}
