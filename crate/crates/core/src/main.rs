use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use patchwork::geometry::{make_chair, make_grid, make_qp, BBox};
use patchwork::io::svg::{bt_layers, render_svg, Layer, RenderSpec};
use patchwork::io::{emit_canonical, parse_coloring, parse_pattern, parse_tiling, tiling_to_json};
use patchwork::metric::{delta, tiling_distance, DistanceOptions};
use patchwork::ramsey::{brown_search, gallai_search, topological_brown, verify_topological_brown, CircleRotation, OrbitSystem, TorusRotations};
use patchwork::recurrence::{bt_search, local_iso_radius, lw_search, return_set, BtCertificate, BtOptions};
use patchwork::theta::{check_g5, check_theta_axioms, ThetaGrid};
use patchwork::{Action, Ball, Error, Patch, Point, Result, ThetaFn, TilingSource};

#[derive(Parser)]
#[command(name = "patchwork", version, about = "Tiling-space distances and recurrence certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Distance interval between two tilings.
    Distance {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value = "translation")]
        action: String,
        #[arg(long, default_value = "identity")]
        theta: String,
        #[arg(long, default_value_t = 12.0)]
        max_radius: f64,
    },
    /// Copy-containment radius for the patch covering B_radius.
    Delta {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        r: f64,
        #[arg(long, default_value = "rigid")]
        action: String,
    },
    /// q-distorted homothetic copy in a finite coloring.
    Brown {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        k: i64,
        #[arg(long, default_value_t = 8)]
        q_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monochromatic homothetic copy in a finite coloring.
    Gallai {
        #[arg(long)]
        coloring: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value_t = 10)]
        k_max: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recurrence witnesses for a rotation system.
    TopoBrown {
        /// `golden` (circle) or `torus` (two rotations).
        #[arg(long, default_value = "golden")]
        system: String,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',')]
        ks: Vec<i64>,
        #[arg(long, default_value_t = 500)]
        window: usize,
        #[arg(long, default_value_t = 10)]
        q_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Copies of the B_{1/eps} patch at k v_i + u.
    Lw {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 20)]
        k_max: i64,
        #[arg(long, default_value = "translation")]
        action: String,
        #[arg(long, default_value = "identity")]
        theta: String,
        #[arg(long)]
        window: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Uniform-q copies of the B_{1/eps} patch near λF + t_λ.
    Bt {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long, value_delimiter = ',')]
        lambdas: Vec<f64>,
        #[arg(long, default_value = "translation")]
        action: String,
        #[arg(long, default_value = "identity")]
        theta: String,
        #[arg(long, default_value_t = 12)]
        q_max: u32,
        #[arg(long)]
        window: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Radius of balls that always hold a perturbed copy of a patch.
    LocalIso {
        #[arg(long)]
        tiling: PathBuf,
        /// Patch as an explicit tiling document.
        #[arg(long, conflicts_with = "ball")]
        patch: Option<PathBuf>,
        /// Patch of tiles meeting the ball `cx,cy,r`.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        ball: Option<Vec<f64>>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        window: f64,
        #[arg(long, default_value = "translation")]
        action: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled return vectors of a tiling.
    Returns {
        #[arg(long)]
        tiling: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        window: f64,
        #[arg(long)]
        spacing: Option<f64>,
        #[arg(long, default_value = "translation")]
        action: String,
        #[arg(long, default_value = "identity")]
        theta: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG of a tiling window, optionally with a BT certificate on top.
    Render {
        #[arg(long)]
        tiling: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Axiom checks for a θ function and its containment property.
    CheckAxioms {
        #[arg(long, default_value = "identity")]
        theta: String,
        #[arg(long, default_value = "rigid")]
        action: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Emits a built-in tiling as JSON.
    Fixture {
        /// `grid`, `chair` or `qp`.
        name: String,
        #[arg(long, default_value_t = 5)]
        levels: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Integer points of a coloring pattern.
#[derive(Deserialize)]
struct IntPatternDoc {
    points: Vec<Vec<i64>>,
}

enum Outcome {
    Found(String),
    NotFound(String),
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn tiling(path: &Path) -> Result<TilingSource> {
    parse_tiling(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn json<T: Serialize>(v: &T) -> Result<Outcome> {
    Ok(Outcome::Found(emit_canonical(v)?))
}

fn not_found(what: &str) -> Result<Outcome> {
    Ok(Outcome::NotFound(emit_canonical(&serde_json::json!({ "found": false, "reason": what }))?))
}

fn run(cmd: Cmd) -> Result<(Outcome, Option<PathBuf>)> {
    Ok(match cmd {
        Cmd::Distance { x, y, action, theta, max_radius } => {
            let (x, y) = (tiling(&x)?, tiling(&y)?);
            let d = tiling_distance(&x, &y, &Action::parse(&action)?, &ThetaFn::by_name(&theta)?, &DistanceOptions { max_radius })?;
            (json(&d)?, None)
        }
        Cmd::Delta { tiling: t, radius, r, action } => {
            let p = tiling(&t)?.minimal_patch(&Ball::centered(radius))?;
            (json(&delta(&p, r, &Action::parse(&action)?)?)?, None)
        }
        Cmd::Brown { coloring, pattern, k, q_max, out } => {
            let c = parse_coloring(&read(&coloring)?)?;
            let f: IntPatternDoc = serde_json::from_str(&read(&pattern)?).map_err(|e| Error::Parse(e.to_string()))?;
            match brown_search(&c, &f.points, k, q_max)? {
                Some(cert) => (json(&cert)?, out),
                None => (not_found(&format!("no certificate with q <= {q_max}"))?, out),
            }
        }
        Cmd::Gallai { coloring, pattern, k_max, out } => {
            let c = parse_coloring(&read(&coloring)?)?;
            let f: IntPatternDoc = serde_json::from_str(&read(&pattern)?).map_err(|e| Error::Parse(e.to_string()))?;
            match gallai_search(&c, &f.points, k_max)? {
                Some((k, t)) => (json(&serde_json::json!({ "k": k, "t": t }))?, out),
                None => (not_found(&format!("no monochromatic copy with k <= {k_max}"))?, out),
            }
        }
        Cmd::TopoBrown { system, eps, ks, window, q_max, out } => {
            let sys: Box<dyn OrbitSystem> = match system.as_str() {
                "golden" => Box::new(CircleRotation::golden()),
                "torus" => Box::new(TorusRotations { alphas: vec![(5f64.sqrt() - 1.0) / 2.0, 2f64.sqrt() - 1.0] }),
                other => return Err(Error::Parse(format!("unknown system `{other}`"))),
            };
            let res = topological_brown(sys.as_ref(), eps, &ks, window, q_max)?;
            let verdict = verify_topological_brown(sys.as_ref(), &res);
            (json(&serde_json::json!({ "result": res, "verified": verdict }))?, out)
        }
        Cmd::Lw { tiling: t, pattern, eps, k_max, action, theta, window, out } => {
            ThetaFn::by_name(&theta)?;
            let f = parse_pattern(&read(&pattern)?)?;
            (json(&lw_search(&tiling(&t)?, &f, eps, k_max, &Action::parse(&action)?, window)?)?, out)
        }
        Cmd::Bt { tiling: t, pattern, eps, lambdas, action, theta, q_max, window, out } => {
            ThetaFn::by_name(&theta)?;
            let f = parse_pattern(&read(&pattern)?)?;
            let opts = BtOptions { q_max, window_r: window };
            (json(&bt_search(&tiling(&t)?, &f, eps, &lambdas, &Action::parse(&action)?, &opts)?)?, out)
        }
        Cmd::LocalIso { tiling: t, patch, ball, eps, window, action, out } => {
            let y = tiling(&t)?;
            let p: Patch = match (patch, ball) {
                (Some(path), _) => match tiling(&path)? {
                    TilingSource::Explicit(p) => p,
                    _ => return Err(Error::Parse("the patch document must be of kind `explicit`".into())),
                },
                (None, Some(b)) => y.tiles_meeting(&Ball::new(Point::new(b[0], b[1]), b[2])?)?,
                (None, None) => return Err(Error::Parse("give --patch or --ball".into())),
            };
            match local_iso_radius(&y, &p, eps, window, &Action::parse(&action)?)? {
                Some(iso) => (json(&iso)?, out),
                None => (not_found("window exhausted before every sampled ball was settled")?, out),
            }
        }
        Cmd::Returns { tiling: t, delta: d, window, spacing, action, theta, out } => {
            let rs = return_set(&tiling(&t)?, d, window, &Action::parse(&action)?, &ThetaFn::by_name(&theta)?, spacing, &DistanceOptions::default())?;
            (json(&rs)?, out)
        }
        Cmd::Render { tiling: t, cert, radius, out } => {
            let mut layers = Vec::new();
            if let Some(t) = t {
                layers.push(Layer::Tiles(tiling(&t)?.window(radius)?.into_tiles()));
            }
            if let Some(c) = cert {
                let cert: BtCertificate = serde_json::from_str(&read(&c)?).map_err(|e| Error::Parse(e.to_string()))?;
                layers.extend(bt_layers(&cert));
            }
            let spec = RenderSpec::new(BBox { min: Point::new(-radius, -radius), max: Point::new(radius, radius) });
            (Outcome::Found(render_svg(&layers, &spec)?), out)
        }
        Cmd::CheckAxioms { theta, action, samples, seed } => {
            let th = ThetaFn::by_name(&theta)?;
            let axioms = check_theta_axioms(&th, &ThetaGrid::default());
            let g5 = check_g5(&Action::parse(&action)?, &th, samples, seed);
            let ok = axioms.passed && g5.passed == g5.samples;
            let body = emit_canonical(&serde_json::json!({ "axioms": axioms, "g5": g5 }))?;
            (if ok { Outcome::Found(body) } else { Outcome::NotFound(body) }, None)
        }
        Cmd::Fixture { name, levels, out } => {
            let src = match name.as_str() {
                "grid" => make_grid(),
                "chair" => make_chair(levels),
                "qp" => make_qp(&[Point::ORIGIN])?,
                other => return Err(Error::Parse(format!("unknown fixture `{other}`"))),
            };
            (Outcome::Found(tiling_to_json(&src)?), out)
        }
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            // a closed pipe (`| head`) is not an error worth reporting
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // usage errors exit 1; 2 is reserved for "no certificate"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("PATCHWORK_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let result = run(cli.cmd).and_then(|(outcome, out)| {
        let (text, code) = match &outcome {
            Outcome::Found(t) => (t, 0),
            Outcome::NotFound(t) => (t, 2),
        };
        emit(text, out.as_deref())?;
        Ok(code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
