//! Prints eigenvalues, XPS lines and the default kinetic energy for the
//! reference parameters.

use xepecs_core::amplitudes::XepecsCalculator;
use xepecs_core::spectra::{default_kinetic_energy, emission_energy, xps_lines_with};
use xepecs_core::{ModelParams, Spin};

fn main() -> xepecs_core::Result<()> {
    let calc = XepecsCalculator::new(ModelParams::default())?;
    println!("E_g = {:.6} eV", calc.model.initial_energy);
    for spin in Spin::ALL {
        let eig = calc.model.intermediate(spin);
        println!("{} subspace", eig.subspace.label);
        for line in xps_lines_with(&calc, spin).lines {
            println!(
                "  J={} kinetic energy {:.6} eV, weight {:.6}",
                line.j.map(|j| j.to_string()).unwrap_or_default(),
                line.position,
                line.weight
            );
        }
    }
    let eps = default_kinetic_energy(&calc);
    println!("default epsilon = {eps:.6} eV, emission line at {:.6} eV", emission_energy(&calc, eps));
    Ok(())
}
