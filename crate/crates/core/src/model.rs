//! The sp-model Hamiltonian and its eigensystems.
//!
//! `H_sp = ε_s n_1s + ε_p n_2p + ζ l·s + H_exch`, with the 1s-2p exchange
//! taken as `H_exch = −2G S_1s·S_2p`. The exchange term vanishes identically
//! unless exactly one 1s electron is present, since a closed 1s shell carries
//! no spin.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::angular::{coupled_state, HalfInt};
use crate::error::{Error, Result};
use crate::fockspace::{FockState, ManyBodyVector, Mode, Operator, Spin, SpinOrbital, C64};

/// Model parameters in eV. Defaults are the reference parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    /// Exchange strength `G`.
    pub g: f64,
    /// 2p spin-orbit constant `ζ`.
    pub zeta: f64,
    pub eps_s: f64,
    pub eps_p: f64,
    /// Incident photon energy `Ω`.
    pub omega: f64,
    /// Core-hole half-width `Γ_1s`.
    pub gamma_1s: f64,
    /// Emitted-photon energy resolution `γ`.
    pub gamma: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams { g: 0.3, zeta: 0.1, eps_s: -13.6, eps_p: -5.0, omega: 20.0, gamma_1s: 0.5, gamma: 0.4 }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("G", self.g),
            ("zeta", self.zeta),
            ("eps_s", self.eps_s),
            ("eps_p", self.eps_p),
            ("Omega", self.omega),
            ("Gamma_1s", self.gamma_1s),
            ("gamma", self.gamma),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        if self.gamma_1s <= 0.0 {
            return Err(Error::InvalidParams(format!("Gamma_1s must be positive, got {}", self.gamma_1s)));
        }
        if self.gamma <= 0.0 {
            return Err(Error::InvalidParams(format!("gamma must be positive, got {}", self.gamma)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubspaceLabel {
    /// `s² p¹` with the incident photon present, `M = 1/2`.
    Initial,
    /// `s¹ p¹` with an up-spin photoelectron, `M = 0`.
    M0,
    /// `s¹ p¹` with a down-spin photoelectron, `M = 1`.
    M1,
}

impl SubspaceLabel {
    /// Intermediate subspace reached by emitting a photoelectron of `spin`.
    pub fn for_photoelectron(spin: Spin) -> SubspaceLabel {
        match spin {
            Spin::Up => SubspaceLabel::M0,
            Spin::Down => SubspaceLabel::M1,
        }
    }

    pub fn photoelectron(self) -> Option<Spin> {
        match self {
            SubspaceLabel::Initial => None,
            SubspaceLabel::M0 => Some(Spin::Up),
            SubspaceLabel::M1 => Some(Spin::Down),
        }
    }
}

impl std::fmt::Display for SubspaceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SubspaceLabel::Initial => "initial (M=1/2)",
            SubspaceLabel::M0 => "intermediate M=0",
            SubspaceLabel::M1 => "intermediate M=1",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    pub label: SubspaceLabel,
    pub basis: Vec<FockState>,
}

fn s_orb(spin: Spin) -> Mode {
    SpinOrbital::s(spin).into()
}

fn p_orb(m: i8, spin: Spin) -> Mode {
    SpinOrbital::p(m, spin).into()
}

impl Subspace {
    pub fn new(label: SubspaceLabel) -> Subspace {
        use Spin::{Down as D, Up as U};
        let state = |modes: Vec<Mode>| FockState::from_modes(modes).expect("distinct modes");
        let basis = match label {
            SubspaceLabel::Initial => vec![
                state(vec![s_orb(U), s_orb(D), p_orb(1, D), Mode::Incident]),
                state(vec![s_orb(U), s_orb(D), p_orb(0, U), Mode::Incident]),
            ],
            SubspaceLabel::M0 => [(U, 0, D), (U, -1, U), (D, 1, D), (D, 0, U)]
                .into_iter()
                .map(|(ss, m, ps)| state(vec![s_orb(ss), p_orb(m, ps), Mode::Photoelectron(U)]))
                .collect(),
            SubspaceLabel::M1 => [(U, 1, D), (U, 0, U), (D, 1, U)]
                .into_iter()
                .map(|(ss, m, ps)| state(vec![s_orb(ss), p_orb(m, ps), Mode::Photoelectron(D)]))
                .collect(),
        };
        Subspace { label, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Expands coefficients over this basis into a Fock-space vector.
    pub fn vector(&self, coeffs: impl IntoIterator<Item = C64>) -> ManyBodyVector {
        ManyBodyVector::from_terms(self.basis.iter().copied().zip(coeffs))
    }
}

// Angular momentum operators.

fn l_plus_factor(m: i8) -> f64 {
    // l = 1: sqrt(l(l+1) - m(m+1))
    f64::from(2 - i32::from(m) * (i32::from(m) + 1)).max(0.0).sqrt()
}

fn spin_raise(modes: impl Fn(Spin) -> Mode) -> Operator {
    Operator::hop(1.0, modes(Spin::Up), modes(Spin::Down))
}

fn spin_z(modes: impl Fn(Spin) -> Mode) -> Operator {
    Operator::number(modes(Spin::Up)) * 0.5 + Operator::number(modes(Spin::Down)) * -0.5
}

/// `S⁺` of the 1s shell.
pub fn s_plus_1s() -> Operator {
    spin_raise(s_orb)
}

/// `S⁺` of the 2p shell.
pub fn s_plus_2p() -> Operator {
    (-1..=1).map(|m| spin_raise(|s| p_orb(m, s))).fold(Operator::zero(), |a, b| a + b)
}

pub fn s_z_1s() -> Operator {
    spin_z(s_orb)
}

pub fn s_z_2p() -> Operator {
    (-1..=1).map(|m| spin_z(|s| p_orb(m, s))).fold(Operator::zero(), |a, b| a + b)
}

/// Orbital `L⁺` of the 2p shell.
pub fn l_plus() -> Operator {
    let mut op = Operator::zero();
    for m in -1..=0 {
        for spin in Spin::ALL {
            op += Operator::hop(l_plus_factor(m), p_orb(m + 1, spin), p_orb(m, spin));
        }
    }
    op
}

pub fn l_z() -> Operator {
    let mut op = Operator::zero();
    for m in -1..=1 {
        for spin in Spin::ALL {
            op += Operator::number(p_orb(m, spin)) * f64::from(m);
        }
    }
    op
}

fn casimir(plus: Operator, z: Operator) -> Operator {
    let minus = plus.adjoint();
    z.compose(&z) + (plus.compose(&minus) + minus.compose(&plus)) * 0.5
}

/// Total `J² = (L + S_1s + S_2p)²` of the sp electrons.
pub fn j_squared() -> Operator {
    casimir(l_plus() + s_plus_1s() + s_plus_2p(), l_z() + s_z_1s() + s_z_2p())
}

/// Total spin `S² = (S_1s + S_2p)²`.
pub fn s_squared() -> Operator {
    casimir(s_plus_1s() + s_plus_2p(), s_z_1s() + s_z_2p())
}

pub fn j_z() -> Operator {
    l_z() + s_z_1s() + s_z_2p()
}

/// One-body `l·s` for the 2p electron: `l_z s_z + (l⁺s⁻ + l⁻s⁺)/2`.
pub fn spin_orbit() -> Operator {
    let mut op = Operator::zero();
    for m in -1..=1i8 {
        for spin in Spin::ALL {
            let diag = f64::from(m) * 0.5 * f64::from(spin.twice_ms());
            if diag != 0.0 {
                op += Operator::number(p_orb(m, spin)) * diag;
            }
        }
    }
    for m in -1..=0i8 {
        // l⁺s⁻ and its adjoint l⁻s⁺.
        let hop = Operator::hop(0.5 * l_plus_factor(m), p_orb(m + 1, Spin::Down), p_orb(m, Spin::Up));
        op += hop.adjoint() + hop;
    }
    op
}

/// `S_1s · S_2p`.
pub fn spin_exchange() -> Operator {
    let (sp_s, sp_p) = (s_plus_1s(), s_plus_2p());
    s_z_1s().compose(&s_z_2p()) + (sp_s.compose(&sp_p.adjoint()) + sp_s.adjoint().compose(&sp_p)) * 0.5
}

pub fn number_1s() -> Operator {
    Spin::ALL.into_iter().map(|s| Operator::number(s_orb(s))).fold(Operator::zero(), |a, b| a + b)
}

pub fn number_2p() -> Operator {
    let mut op = Operator::zero();
    for m in -1..=1 {
        for s in Spin::ALL {
            op += Operator::number(p_orb(m, s));
        }
    }
    op
}

/// The full `H_sp` as a Fock-space operator.
pub fn hamiltonian_operator(params: &ModelParams) -> Operator {
    number_1s() * params.eps_s
        + number_2p() * params.eps_p
        + spin_orbit() * params.zeta
        + spin_exchange() * (-2.0 * params.g)
}

pub fn build_hamiltonian(params: &ModelParams, sub: &Subspace) -> DMatrix<C64> {
    hamiltonian_operator(params).matrix(&sub.basis)
}

/// Eigenpairs of `H_sp` on one subspace.
///
/// Columns of `vectors` are eigenvectors over the subspace basis, sorted by
/// ascending energy; exact ties are ordered by `J` and then by spin character.
#[derive(Clone, Debug)]
pub struct EigenSystem {
    pub subspace: Subspace,
    pub energies: Vec<f64>,
    pub vectors: DMatrix<C64>,
    pub j_labels: Vec<HalfInt>,
    /// `⟨S²⟩` per eigenvector.
    pub s_squared: Vec<f64>,
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn column(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i).iter().copied().collect()
    }

    /// Eigenvector `i` as a Fock-space vector.
    pub fn state(&self, i: usize) -> ManyBodyVector {
        self.subspace.vector(self.column(i))
    }

    /// Largest `‖H v − E v‖` over all eigenpairs.
    pub fn max_residual(&self, h: &DMatrix<C64>) -> f64 {
        (0..self.len())
            .map(|i| {
                let v = self.vectors.column(i);
                (h * v - v * C64::new(self.energies[i], 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const J_LABEL_TOL: f64 = 1e-8;
const DEGENERACY_TOL: f64 = 1e-9;

fn hermitian_deviation(h: &DMatrix<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            dev = dev.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    dev
}

fn expectation(op: &DMatrix<C64>, v: &DMatrix<C64>, col: usize) -> f64 {
    let c = v.column(col);
    (c.adjoint() * op * c)[(0, 0)].re
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
fn hermitian_eigen(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Groups consecutive sorted values closer than `tol`.
fn clusters(values: &[f64], tol: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > tol {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Restricts `op` to the column space of `basis` and diagonalizes it there.
fn refine(op: &DMatrix<C64>, basis: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let reduced = basis.adjoint() * op * basis;
    let (values, w) = hermitian_eigen(&reduced);
    (values, basis * w)
}

fn columns(m: &DMatrix<C64>, range: std::ops::Range<usize>) -> DMatrix<C64> {
    m.columns(range.start, range.len()).into_owned()
}

/// Rotates each column so its largest component is real and positive.
fn fix_phases(v: &mut DMatrix<C64>) {
    for mut col in v.column_iter_mut() {
        let max = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if let Some(pivot) = col.iter().find(|z| z.norm() > max - 1e-12).copied() {
            let phase = pivot.conj() / pivot.norm();
            col.iter_mut().for_each(|z| *z *= phase);
        }
    }
}

/// Diagonalizes `h` on `sub`, resolving degeneracies by `J²` and then `S²`.
pub fn diagonalize(h: &DMatrix<C64>, sub: &Subspace) -> Result<EigenSystem> {
    let deviation = hermitian_deviation(h);
    if deviation > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let j2 = j_squared().matrix(&sub.basis);
    let s2 = s_squared().matrix(&sub.basis);

    let (j_values, j_vectors) = hermitian_eigen(&j2);
    let mut collected: Vec<DMatrix<C64>> = Vec::new();
    for block in clusters(&j_values, 1e-6) {
        let (energies, hv) = refine(h, &columns(&j_vectors, block));
        for deg in clusters(&energies, DEGENERACY_TOL) {
            let (_, sv) = refine(&s2, &columns(&hv, deg));
            collected.push(sv);
        }
    }
    let n = sub.dim();
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    let mut k = 0;
    for block in &collected {
        for c in 0..block.ncols() {
            vectors.set_column(k, &block.column(c));
            k += 1;
        }
    }
    fix_phases(&mut vectors);

    let mut records = Vec::with_capacity(n);
    for i in 0..n {
        let jj = expectation(&j2, &vectors, i);
        let j = HalfInt::from_casimir(jj, J_LABEL_TOL).ok_or(Error::UnassignableJ { value: jj })?;
        records.push((expectation(h, &vectors, i), j, expectation(&s2, &vectors, i), i));
    }
    records.sort_by(|a, b| a.0.total_cmp(&b.0));
    let energies_sorted: Vec<f64> = records.iter().map(|r| r.0).collect();
    let mut keyed = Vec::with_capacity(n);
    for (cluster, range) in clusters(&energies_sorted, DEGENERACY_TOL).into_iter().enumerate() {
        for r in &records[range] {
            keyed.push((cluster, *r));
        }
    }
    keyed.sort_by(|(ca, a), (cb, b)| ca.cmp(cb).then(a.1.cmp(&b.1)).then(a.2.total_cmp(&b.2)));

    let order: Vec<usize> = keyed.iter().map(|(_, r)| r.3).collect();
    Ok(EigenSystem {
        subspace: sub.clone(),
        energies: keyed.iter().map(|(_, r)| r.0).collect(),
        vectors: DMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]),
        j_labels: keyed.iter().map(|(_, r)| r.1).collect(),
        s_squared: keyed.iter().map(|(_, r)| r.2).collect(),
    })
}

/// `s†↑ s†↓ (√(2/3) p†₁↓ − √(1/3) p†₀↑) a† |0⟩` and its energy `E_g`.
///
/// The 2p part is assembled from the `(l=1, s=1/2) j=1/2, m=1/2` coupling.
pub fn initial_state(params: &ModelParams) -> Result<(ManyBodyVector, f64)> {
    let coupling = coupled_state(HalfInt::ONE, HalfInt::HALF, HalfInt::HALF, HalfInt::HALF)?;
    let photon = ManyBodyVector::vacuum().create(Mode::Incident);
    let mut valence = ManyBodyVector::zero();
    for ((ml, ms), c) in coupling {
        let spin = if ms.twice() > 0 { Spin::Up } else { Spin::Down };
        let orb = SpinOrbital::p((ml.twice() / 2) as i8, spin);
        valence += photon.create(orb).scale(Complex64::new(c, 0.0));
    }
    let g = valence.create(SpinOrbital::s(Spin::Down)).create(SpinOrbital::s(Spin::Up));

    let h = hamiltonian_operator(params);
    let hg = h.apply(&g);
    let energy = g.inner(&hg).re;
    let residual = hg.max_deviation(&g.scale(Complex64::new(energy, 0.0)));
    if residual > 1e-10 {
        return Err(Error::NotEigenvector { residual });
    }
    Ok((g, energy))
}

/// Initial state and both intermediate eigensystems for one parameter set.
#[derive(Clone, Debug)]
pub struct SpModel {
    pub params: ModelParams,
    pub initial: ManyBodyVector,
    pub initial_energy: f64,
    pub m0: EigenSystem,
    pub m1: EigenSystem,
}

impl SpModel {
    pub fn new(params: ModelParams) -> Result<SpModel> {
        params.validate()?;
        let (initial, initial_energy) = initial_state(&params)?;
        let solve = |label| {
            let sub = Subspace::new(label);
            diagonalize(&build_hamiltonian(&params, &sub), &sub)
        };
        Ok(SpModel { params, initial, initial_energy, m0: solve(SubspaceLabel::M0)?, m1: solve(SubspaceLabel::M1)? })
    }

    /// Intermediate eigensystem reached by emitting a photoelectron of `spin`.
    pub fn intermediate(&self, spin: Spin) -> &EigenSystem {
        match spin {
            Spin::Up => &self.m0,
            Spin::Down => &self.m1,
        }
    }

    /// Energy of the closed-shell final sp state `s†↑ s†↓|0⟩`.
    pub fn final_energy(&self) -> f64 {
        2.0 * self.params.eps_s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn relative_params(g: f64, zeta: f64) -> ModelParams {
        ModelParams { g, zeta, eps_s: 0.0, eps_p: 0.0, ..ModelParams::default() }
    }

    fn assert_matrix(got: &DMatrix<C64>, want: &[&[f64]], tol: f64) {
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                assert!((got[(i, j)] - c(*w)).norm() < tol, "({i},{j}): {} vs {w}", got[(i, j)]);
            }
        }
    }

    fn commutator_norm(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
        (a * b - b * a).norm()
    }

    #[test]
    fn subspace_dimensions() {
        assert_eq!(Subspace::new(SubspaceLabel::Initial).dim(), 2);
        assert_eq!(Subspace::new(SubspaceLabel::M0).dim(), 4);
        assert_eq!(Subspace::new(SubspaceLabel::M1).dim(), 3);
    }

    #[test]
    fn m1_hamiltonian_matches_hand_algebra() {
        // Basis (s↑p₁↓, s↑p₀↑, s↓p₁↑); entries derived by hand from l·s and −2G S·S.
        let (g, z) = (0.3, 0.1);
        let h = build_hamiltonian(&relative_params(g, z), &Subspace::new(SubspaceLabel::M1));
        let r = z * FRAC_1_SQRT_2;
        assert_matrix(&h, &[&[g / 2.0 - z / 2.0, r, -g], &[r, -g / 2.0, 0.0], &[-g, 0.0, g / 2.0 + z / 2.0]], 1e-15);
        assert_matrix(&h, &[&[0.10, 0.0707106781186548, -0.30], &[0.0707106781186548, -0.15, 0.0], &[-0.30, 0.0, 0.20]], 1e-15);
    }

    #[test]
    fn m0_hamiltonian_matches_hand_algebra() {
        // Basis (s↑p₀↓, s↑p₋₁↑, s↓p₁↓, s↓p₀↑).
        let (g, z) = (0.3, 0.1);
        let h = build_hamiltonian(&relative_params(g, z), &Subspace::new(SubspaceLabel::M0));
        let r = z * FRAC_1_SQRT_2;
        let d = -g / 2.0 - z / 2.0;
        assert_matrix(
            &h,
            &[&[g / 2.0, r, 0.0, -g], &[r, d, 0.0, 0.0], &[0.0, 0.0, d, r], &[-g, 0.0, r, g / 2.0]],
            1e-15,
        );
    }

    #[test]
    fn initial_subspace_hamiltonian() {
        let p = ModelParams::default();
        let h = build_hamiltonian(&p, &Subspace::new(SubspaceLabel::Initial));
        let base = 2.0 * p.eps_s + p.eps_p;
        let r = p.zeta * FRAC_1_SQRT_2;
        assert_matrix(&h, &[&[base - p.zeta / 2.0, r], &[r, base]], 1e-14);
    }

    #[test]
    fn trivial_limits() {
        let p = ModelParams { g: 0.0, zeta: 0.0, ..ModelParams::default() };
        for label in [SubspaceLabel::M0, SubspaceLabel::M1] {
            let sub = Subspace::new(label);
            let h = build_hamiltonian(&p, &sub);
            let expected = DMatrix::<C64>::identity(sub.dim(), sub.dim()) * c(p.eps_s + p.eps_p);
            assert!((h - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let p = ModelParams { g: 0.7, zeta: -0.4, ..ModelParams::default() };
        for label in [SubspaceLabel::Initial, SubspaceLabel::M0, SubspaceLabel::M1] {
            let h = build_hamiltonian(&p, &Subspace::new(label));
            assert_eq!(h, h.adjoint());
        }
    }

    #[test]
    fn j_labels_and_degeneracy() {
        let model = SpModel::new(ModelParams::default()).unwrap();
        let mut j0: Vec<i32> = model.m0.j_labels.iter().map(|j| j.twice() / 2).collect();
        j0.sort();
        assert_eq!(j0, vec![0, 1, 1, 2]);
        let mut j1: Vec<i32> = model.m1.j_labels.iter().map(|j| j.twice() / 2).collect();
        j1.sort();
        assert_eq!(j1, vec![1, 1, 2]);

        let j1_energies = |e: &EigenSystem| -> Vec<f64> {
            e.energies.iter().zip(&e.j_labels).filter(|(_, j)| **j == HalfInt::ONE).map(|(e, _)| *e).collect()
        };
        let (a, b) = (j1_energies(&model.m0), j1_energies(&model.m1));
        assert_eq!(a.len(), 2);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
        // J=2 shares its energy between M=0 and M=1 as well.
        let j2 = |e: &EigenSystem| e.energies[e.j_labels.iter().position(|j| j.twice() == 4).unwrap()];
        assert!((j2(&model.m0) - j2(&model.m1)).abs() < 1e-10);
    }

    #[test]
    fn closed_form_level_energies() {
        // Within S=1, s_p projects to S/2: E = −G/2 + (ζ/4)[J(J+1) − 4].
        let p = ModelParams::default();
        let model = SpModel::new(p).unwrap();
        let base = p.eps_s + p.eps_p;
        let find = |j: i32| {
            let k = model.m0.j_labels.iter().position(|x| x.twice() == 2 * j).unwrap();
            model.m0.energies[k] - base
        };
        assert!((find(0) - (-p.g / 2.0 - p.zeta)).abs() < 1e-12);
        assert!((find(2) - (-p.g / 2.0 + p.zeta / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn eigensystems_are_exact() {
        for p in [ModelParams::default(), ModelParams { g: 1.1, zeta: 0.45, ..ModelParams::default() }] {
            for label in [SubspaceLabel::Initial, SubspaceLabel::M0, SubspaceLabel::M1] {
                let sub = Subspace::new(label);
                let h = build_hamiltonian(&p, &sub);
                let eig = diagonalize(&h, &sub).unwrap();
                assert!(eig.max_residual(&h) < 1e-10);
                let u = &eig.vectors;
                let n = sub.dim();
                assert!((u.adjoint() * u - DMatrix::<C64>::identity(n, n)).norm() < 1e-10);
                let trace: C64 = (0..n).map(|i| h[(i, i)]).sum();
                assert!((trace.re - eig.energies.iter().sum::<f64>()).abs() < 1e-10);
                assert!(eig.energies.windows(2).all(|w| w[0] <= w[1] + 1e-12));
            }
        }
    }

    #[test]
    fn angular_momentum_commutes_with_h() {
        let p = ModelParams::default();
        for label in [SubspaceLabel::Initial, SubspaceLabel::M0, SubspaceLabel::M1] {
            let sub = Subspace::new(label);
            let h = build_hamiltonian(&p, &sub);
            assert!(commutator_norm(&j_squared().matrix(&sub.basis), &h) < 1e-10);
            assert!(commutator_norm(&j_z().matrix(&sub.basis), &h) < 1e-10);
        }
    }

    #[test]
    fn zero_spin_orbit_gives_pure_spin() {
        let p = ModelParams { zeta: 0.0, ..ModelParams::default() };
        let model = SpModel::new(p).unwrap();
        for eig in [&model.m0, &model.m1] {
            for s2 in &eig.s_squared {
                assert!((s2 - 0.0).abs() < 1e-10 || (s2 - 2.0).abs() < 1e-10, "⟨S²⟩ = {s2}");
            }
        }
    }

    #[test]
    fn fully_degenerate_limit_still_labels() {
        let model = SpModel::new(ModelParams { g: 0.0, zeta: 0.0, ..ModelParams::default() }).unwrap();
        assert_eq!(model.m0.len(), 4);
        for s2 in &model.m0.s_squared {
            assert!((s2 - 0.0).abs() < 1e-10 || (s2 - 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn coupled_basis_diagonalizes_without_spin_orbit() {
        // |(1 S) J M⟩ from two successive couplings: (s_1s ⊗ s_2p → S), then (L ⊗ S → J).
        let p = ModelParams { zeta: 0.0, ..ModelParams::default() };
        for (label, m_total) in [(SubspaceLabel::M0, 0), (SubspaceLabel::M1, 1)] {
            let sub = Subspace::new(label);
            let h = hamiltonian_operator(&p);
            let (j2, s2) = (j_squared(), s_squared());
            for s_total in 0..=1i32 {
                for j_total in (1 - s_total).abs().max(m_total)..=(1 + s_total) {
                    let (jj, ss, mm) = (HalfInt::from_int(j_total), HalfInt::from_int(s_total), HalfInt::from_int(m_total));
                    let mut v = ManyBodyVector::zero();
                    for (&basis, _) in sub.basis.iter().zip(0..) {
                        let ss_spin = if basis.is_occupied(SpinOrbital::s(Spin::Up)) { Spin::Up } else { Spin::Down };
                        let p_orbital = SpinOrbital::all()
                            .into_iter()
                            .find(|o| o.shell == crate::fockspace::Shell::P2p && basis.is_occupied(*o))
                            .unwrap();
                        let ms1 = HalfInt::from_twice(ss_spin.twice_ms());
                        let ms2 = HalfInt::from_twice(p_orbital.spin.twice_ms());
                        let ml = HalfInt::from_int(i32::from(p_orbital.m));
                        let coef = crate::angular::cg(HalfInt::HALF, ms1, HalfInt::HALF, ms2, ss, ms1 + ms2)
                            * crate::angular::cg(HalfInt::ONE, ml, ss, ms1 + ms2, jj, mm);
                        v.add_term(basis, c(coef));
                    }
                    if v.norm() < 1e-12 {
                        continue;
                    }
                    assert!((v.norm() - 1.0).abs() < 1e-12);
                    assert!((j2.element(&v, &v).re - jj.casimir()).abs() < 1e-12);
                    assert!((s2.element(&v, &v).re - ss.casimir()).abs() < 1e-12);
                    let e = h.element(&v, &v).re;
                    assert!(h.apply(&v).max_deviation(&v.scale(c(e))) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn initial_state_properties() {
        let p = ModelParams::default();
        let (g, e_g) = initial_state(&p).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-15);
        assert!((g.inner(&g).re - 1.0).abs() < 1e-15);
        assert!((e_g - (2.0 * p.eps_s + p.eps_p - p.zeta)).abs() < 1e-12);
        assert!((j_squared().element(&g, &g).re - 0.75).abs() < 1e-12);
        assert!((j_z().element(&g, &g).re - 0.5).abs() < 1e-12);

        // Matches the lower eigenvector of the 2x2 initial-subspace problem.
        let sub = Subspace::new(SubspaceLabel::Initial);
        let eig = diagonalize(&build_hamiltonian(&p, &sub), &sub).unwrap();
        assert!((eig.energies[0] - e_g).abs() < 1e-12);
        assert_eq!(eig.j_labels, vec![HalfInt::HALF, HalfInt::from_twice(3)]);
        let overlap = eig.state(0).inner(&g).norm();
        assert!((overlap - 1.0).abs() < 1e-12);
        let coeffs: Vec<C64> = sub.basis.iter().map(|b| g.amplitude(b)).collect();
        assert!((coeffs[0] - c((2.0f64 / 3.0).sqrt())).norm() < 1e-15);
        assert!((coeffs[1] - c(-(1.0f64 / 3.0).sqrt())).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let sub = Subspace::new(SubspaceLabel::M1);
        let mut h = build_hamiltonian(&ModelParams::default(), &sub);
        h[(0, 1)] += c(1e-6);
        assert!(matches!(diagonalize(&h, &sub), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SpModel::new(ModelParams { gamma_1s: 0.0, ..ModelParams::default() }).is_err());
        assert!(SpModel::new(ModelParams { gamma: -1.0, ..ModelParams::default() }).is_err());
        assert!(SpModel::new(ModelParams { g: f64::NAN, ..ModelParams::default() }).is_err());
    }
}
