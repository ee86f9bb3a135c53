//! Command-line interface: lattice construction, contraction, map
//! checking, one-shot decoding, Monte Carlo scans, and transformation
//! circuit emission/verification.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ccmap::circuits::{emit_lattice_circuit, verify_circuit};
use ccmap::codemap::{build_map, check_map, local_image_rows};
use ccmap::colex::{label_faces, Colex, Color};
use ccmap::contraction::contract;
use ccmap::decode::{DecoderContext, ErasureMapMode};
use ccmap::fileio;
use ccmap::noise::induced_marginals;
use ccmap::sim::{self, ChannelKind, LatticeFamily, SimConfig};

#[derive(Parser)]
#[command(name = "ccmap", version, about = "Color codes as pairs of surface codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a lattice and write it as structured JSON.
    Lattice {
        #[arg(long, value_parser = parse_family)]
        family: LatticeFamily,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Contract a lattice and write the surface graph with the
    /// correspondence tables.
    Map {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long, value_parser = parse_color)]
        contract_color: Color,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the per-face generator image table and run the map
    /// invariant suite; exits nonzero on any violation.
    MapCheck {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Decode one syndrome (optionally with an erasure pattern) and
    /// print the correction.
    Decode {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        syndrome: PathBuf,
        #[arg(long)]
        erasure: Option<PathBuf>,
        #[arg(long)]
        naive_erasure_map: bool,
        /// Weight matchings by the induced marginals of --channel/--rate.
        #[arg(long, requires = "rate")]
        weighted: bool,
        #[arg(long, value_parser = parse_channel, default_value = "bitflip")]
        channel: ChannelKind,
        #[arg(long)]
        rate: Option<f64>,
    },
    /// Monte Carlo logical-failure scan over a rate grid.
    Simulate {
        #[arg(long, value_parser = parse_family)]
        family: LatticeFamily,
        /// Comma-separated lattice sizes, e.g. 4,6,8.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, value_parser = parse_channel)]
        channel: ChannelKind,
        /// Comma list or start:end:step range, e.g. 0.04:0.065:0.0025.
        #[arg(long)]
        rates: String,
        #[arg(long, default_value_t = 20_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        naive_erasure_map: bool,
        /// CSV output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot-ready data file.
        #[arg(long)]
        gnuplot: Option<PathBuf>,
    },
    /// Emit the transformation circuit for a lattice.
    EmitCircuit {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Verify the transformation circuit against the Pauli map; exits
    /// nonzero on a mismatch.
    VerifyCircuit {
        #[arg(long)]
        lattice: PathBuf,
    },
}

fn parse_family(s: &str) -> Result<LatticeFamily, String> {
    LatticeFamily::parse(s)
        .ok_or_else(|| format!("unknown family {s:?} (square-octagon|hexagonal)"))
}

fn parse_channel(s: &str) -> Result<ChannelKind, String> {
    ChannelKind::parse(s)
        .ok_or_else(|| format!("unknown channel {s:?} (bitflip|phaseflip|erasure)"))
}

fn parse_color(s: &str) -> Result<Color, String> {
    Color::parse(s).ok_or_else(|| format!("unknown color {s:?} (r|g|b)"))
}

fn parse_rates(spec: &str) -> Result<Vec<f64>, String> {
    let bad = |m: &str| format!("bad rate spec {spec:?}: {m}");
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("want start:end:step"));
        }
        let start: f64 = parts[0].parse().map_err(|_| bad("start"))?;
        let end: f64 = parts[1].parse().map_err(|_| bad("end"))?;
        let step: f64 = parts[2].parse().map_err(|_| bad("step"))?;
        if step <= 0.0 || end < start {
            return Err(bad("need step > 0 and end >= start"));
        }
        let mut rates = Vec::new();
        let mut k = 0;
        loop {
            let r = start + step * k as f64;
            if r > end + 1e-12 {
                break;
            }
            rates.push(r);
            k += 1;
        }
        Ok(rates)
    } else {
        spec.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| bad(s)))
            .collect()
    }
}

fn load_lattice(path: &PathBuf) -> Result<Colex, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    fileio::lattice_from_json(&text).map_err(|e| e.to_string())
}

fn run() -> Result<(), String> {
    match Cli::parse().command {
        Command::Lattice { family, size, out } => {
            let colex = family.build(size).map_err(|e| e.to_string())?;
            fs::write(&out, fileio::lattice_to_json(&colex)).map_err(|e| e.to_string())?;
            println!(
                "{} L={size}: {} qubits, {} edges, {} faces -> {}",
                family.name(),
                colex.n_vertices(),
                colex.edges().len(),
                colex.faces().len(),
                out.display()
            );
            Ok(())
        }
        Command::Map {
            lattice,
            contract_color,
            out,
        } => {
            let colex = load_lattice(&lattice)?;
            let surface = contract(&colex, contract_color).map_err(|e| e.to_string())?;
            fs::write(&out, fileio::surface_to_json(&surface)).map_err(|e| e.to_string())?;
            println!(
                "contracted {contract_color}: {} vertices, {} edges, {} faces -> {}",
                surface.n_vertices,
                surface.edges.len(),
                surface.faces.len(),
                out.display()
            );
            Ok(())
        }
        Command::MapCheck { lattice } => {
            let colex = load_lattice(&lattice)?;
            let color = colex.default_contract_color();
            let surface = contract(&colex, color).map_err(|e| e.to_string())?;
            let labeling = label_faces(&colex, color);
            let map = build_map(&colex, &surface, &labeling).map_err(|e| e.to_string())?;

            println!("contract color: {color}");
            let mut shapes: Vec<(usize, usize)> = labeling
                .labels
                .iter()
                .map(|lb| (lb.half_len(), lb.m))
                .collect();
            shapes.sort_unstable();
            shapes.dedup();
            for (l, m) in shapes {
                println!("single-qubit error images for faces with l={l}, m={m}:");
                println!("{:>6} | {:<14} {:>6} | {:<14}", "E", "image", "E", "image");
                for (ex, img_x, ez, img_z) in local_image_rows(l, m) {
                    println!("{ex:>6} | {img_x:<14} {ez:>6} | {img_z:<14}");
                }
            }

            let mut failed = false;
            for (name, result) in check_map(&colex, &surface, &labeling, &map) {
                match result {
                    Ok(()) => println!("PASS {name}"),
                    Err(e) => {
                        failed = true;
                        println!("FAIL {name}: {e}");
                    }
                }
            }
            if failed {
                Err("map check failed".into())
            } else {
                Ok(())
            }
        }
        Command::Decode {
            lattice,
            syndrome,
            erasure,
            naive_erasure_map,
            weighted,
            channel,
            rate,
        } => {
            let colex = load_lattice(&lattice)?;
            let color = colex.default_contract_color();
            let ctx = if weighted {
                let r = rate.expect("--weighted requires --rate");
                let surface = contract(&colex, color).map_err(|e| e.to_string())?;
                let labeling = label_faces(&colex, color);
                let model = induced_marginals(&surface, &labeling, channel.at(r))
                    .map_err(|e| e.to_string())?;
                DecoderContext::with_weights(colex, color, &model)
            } else {
                DecoderContext::new(colex, color)
            };
            let text = fs::read_to_string(&syndrome)
                .map_err(|e| format!("{}: {e}", syndrome.display()))?;
            let s = fileio::syndrome_from_json(&text, ctx.colex.faces().len())
                .map_err(|e| e.to_string())?;
            let correction = match erasure {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    let erased = fileio::erasure_from_json(&text).map_err(|e| e.to_string())?;
                    let mode = if naive_erasure_map {
                        ErasureMapMode::Naive
                    } else {
                        ErasureMapMode::Improved
                    };
                    ctx.decode_erasure(&erased, &s, mode)
                        .map_err(|e| e.to_string())?
                }
                None => ctx.decode_color(&s).map_err(|e| e.to_string())?,
            };
            println!("{correction}");
            Ok(())
        }
        Command::Simulate {
            family,
            sizes,
            channel,
            rates,
            trials,
            seed,
            workers,
            weighted,
            naive_erasure_map,
            out,
            gnuplot,
        } => {
            let config = SimConfig {
                family,
                sizes,
                channel,
                rates: parse_rates(&rates)?,
                trials,
                seed,
                workers,
                weighted,
                naive_erasure: naive_erasure_map,
            };
            let points = sim::run(&config).map_err(|e| e.to_string())?;
            let csv = fileio::points_to_csv(&points);
            match &out {
                Some(path) => {
                    fs::write(path, &csv).map_err(|e| e.to_string())?;
                    eprintln!("wrote {} points to {}", points.len(), path.display());
                }
                None => print!("{csv}"),
            }
            if let Some(path) = gnuplot {
                fs::write(&path, fileio::points_to_gnuplot(&points)).map_err(|e| e.to_string())?;
            }
            if config.sizes.len() >= 2 && config.rates.len() >= 2 {
                match sim::estimate_threshold(&points) {
                    Ok(est) => {
                        for (a, b, c) in &est.pair_crossings {
                            eprintln!("crossing L={a} x L={b}: {c:.5}");
                        }
                        eprintln!(
                            "threshold estimate: {:.5} +/- {:.5}",
                            est.estimate, est.uncertainty
                        );
                    }
                    Err(e) => eprintln!("threshold estimate unavailable: {e}"),
                }
            }
            Ok(())
        }
        Command::EmitCircuit { lattice, out } => {
            let colex = load_lattice(&lattice)?;
            let color = colex.default_contract_color();
            let labeling = label_faces(&colex, color);
            let circuit = emit_lattice_circuit(&colex, &labeling).map_err(|e| e.to_string())?;
            fs::write(&out, fileio::circuit_to_text(&circuit)).map_err(|e| e.to_string())?;
            println!(
                "{} gates ({} CX, {} SWAP, {} H) -> {}",
                circuit.gates.len(),
                circuit.cx_count(),
                circuit.swap_count(),
                circuit.h_count(),
                out.display()
            );
            Ok(())
        }
        Command::VerifyCircuit { lattice } => {
            let colex = load_lattice(&lattice)?;
            let color = colex.default_contract_color();
            let surface = contract(&colex, color).map_err(|e| e.to_string())?;
            let labeling = label_faces(&colex, color);
            let map = build_map(&colex, &surface, &labeling).map_err(|e| e.to_string())?;
            verify_circuit(&colex, &labeling, &surface.tau_vertex, &map)
                .map_err(|e| e.to_string())?;
            println!(
                "circuit matches the map on all {} generators",
                2 * colex.n_vertices()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
