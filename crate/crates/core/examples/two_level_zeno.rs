//! Projective measurements on a Rabi-driven two-level atom.
//!
//! `cargo run --example two_level_zeno -- [omega]`

use zeno_lab::matrix_models::{build_two_level, projective_zeno, ZenoRunSpec};

fn main() -> zeno_lab::Result<()> {
    let omega: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1.0);
    let atom = build_two_level(omega)?;
    let t = 1.0;

    println!("{:>5} {:>20} {:>20}", "N", "s_N(t)", "cos^2N(Ωt/N)");
    for k in 0..=8 {
        let n = 1usize << k;
        let s = projective_zeno(&atom, &ZenoRunSpec::over(t, n)?)?;
        let closed = (omega * t / n as f64).cos().powi(2 * n as i32);
        println!("{n:>5} {:>20.16} {closed:>20.16}", s.last().1);
    }

    // fixed spacing: s_N(t) ≈ exp(−α t Δt)
    let dt = 0.1;
    let s = projective_zeno(&atom, &ZenoRunSpec::every(dt, 10)?)?;
    let (t_end, s_end) = s.last();
    println!("\nΔt = {dt}: s({t_end}) = {s_end:.6}, exp(−αtΔt) = {:.6}", (-atom.short_time_alpha() * t_end * dt).exp());
    Ok(())
}
