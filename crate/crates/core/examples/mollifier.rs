//! The canonical bump, its scaled form and its antiderivatives.

use wavesplit::mollifier::MollifierProfile;

fn main() {
    let m = MollifierProfile::canonical();
    println!("K          = {:.15}", m.normalization());
    println!("phi(0)     = {:.15}", m.peak());
    println!("Phi(0.5)   = {:.15}", m.antiderivative(0.5));
    println!("Psi(0)     = {:.15}", m.second_antiderivative(0.0));
    for eps in [0.1, 0.01] {
        println!("phi_eps(0) = {:.6} at eps = {eps}", m.eval_scaled(eps, 0.0));
    }
}
