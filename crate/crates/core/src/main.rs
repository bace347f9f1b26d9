use clap::Parser;
use kdsim::cli::{Cli, Command};
use kdsim::driver;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn dispatch(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Run(ov) => {
            let cfg = ov.resolve()?;
            let outcome = driver::run(&cfg)?;
            let r = &outcome.report;
            println!(
                "max |c|^2: spin-up {:.6e} at {:?}, spin-down {:.6e} at {:?} (flip ratio {:.3})",
                r.max_up, r.argmax_up, r.max_down, r.argmax_down, r.flip_ratio
            );
            println!(
                "{} contributions in {:.3} s ({:.2} us each), {} guard fallbacks",
                r.iterations, r.wall_time_s, r.per_contribution_us, r.guard_activations
            );
            println!("outputs in {}", cfg.out_dir.display());
        }
        Command::SweepYPos(ov) => {
            let cfg = ov.resolve()?;
            let report = driver::sweep_y_position(&cfg)?;
            print_sweep(&report);
        }
        Command::SweepYMom(ov) => {
            let cfg = ov.resolve()?;
            let report = driver::sweep_y_momentum(&cfg)?;
            print_sweep(&report);
        }
        Command::SweepX(ov) => {
            let cfg = ov.resolve()?;
            let panels = driver::sweep_x(&cfg)?;
            for p in &panels {
                println!(
                    "n_x={:<3} x_w={:>5} lambda: max up {:.6e} down {:.6e}",
                    p.n_x, p.x_w_lambda, p.report.max_up, p.report.max_down
                );
            }
            println!("outputs in {}", cfg.out_dir.display());
        }
        Command::AblateLongitudinal(ov) => {
            let cfg = ov.resolve()?;
            let report = driver::ablate_longitudinal(&cfg)?;
            println!(
                "spin-up max: with {:.6e}, without {:.6e} ({:.3}% change)",
                report.with_longitudinal.max_up,
                report.without_longitudinal.max_up,
                100.0 * report.rel_diff_up
            );
            println!(
                "spin-down max: with {:.6e}, without {:.6e} ({:.3}% change)",
                report.with_longitudinal.max_down,
                report.without_longitudinal.max_down,
                100.0 * report.rel_diff_down
            );
            println!("outputs in {}", cfg.out_dir.display());
        }
        Command::FieldDump(ov) => {
            let cfg = ov.resolve()?;
            driver::field_dump(&cfg)?;
            println!("field dumps in {}", cfg.out_dir.display());
        }
        Command::Count(ov) => {
            let cfg = ov.resolve()?;
            println!("loop iterations: {}", driver::scenario_count(&cfg));
            println!(
                "general index-tuple count (2 vertices, no extra grids): {}",
                driver::count_iterations(2, 2, 0, &[cfg.n_x, cfg.n_y])
            );
        }
    }
    Ok(())
}

fn print_sweep(report: &kdsim::driver::SweepReport) {
    for (i, r) in report.runs.iter().enumerate() {
        println!(
            "n_y={:<3} y_w={:>5} lambda: window max up {:.6e} down {:.6e} (shape dev up {:.2e} down {:.2e})",
            r.report.n_y,
            r.report.y_w_lambda,
            r.window_max_up,
            r.window_max_down,
            report.shape_deviation_up[i],
            report.shape_deviation_down[i]
        );
    }
}
