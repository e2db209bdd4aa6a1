//! Growth orders per cell and the singular-support mask for figure1.

use wavesplit::runner::{preset, run, Stage};

fn main() -> wavesplit::Result<()> {
    let out = run(&preset("figure1")?, Stage::Singsupp)?;
    let rays = out.report.rays.as_ref().expect("analyzed");
    println!(
        "{} singular cells; four-ray precision {:.3} recall {:.3}",
        rays.four_ray.singular_cells, rays.four_ray.precision, rays.four_ray.recall
    );
    let g = out.report.growth.as_ref().expect("analyzed");
    for c in g.cells.iter().filter(|c| (c.t - 0.55).abs() < 1e-9 && c.x.abs() < 0.8) {
        let p: Vec<String> = c
            .fits
            .iter()
            .map(|f| f.exponent().map_or("-".into(), |p| format!("{p:.2}")))
            .collect();
        println!("t {:.2} x {:+.2}  p_n = [{}]", c.t, c.x, p.join(", "));
    }
    Ok(())
}
