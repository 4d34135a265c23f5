//! Command-line renderer: load a scene, render, write a PPM.

use clap::Parser;
use deckray::integrator::RenderSettings;
use deckray::ppm::write_ppm;
use deckray::render::render_with_threads;
use deckray::scene::parse_scene;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const BUILTIN_SCENES: &[(&str, &str)] = &[
    (
        "cornell_torus",
        include_str!("../../../scenes/cornell_torus.json"),
    ),
    (
        "mirrored_dodecahedron",
        include_str!("../../../scenes/mirrored_dodecahedron.json"),
    ),
];

/// Path tracer for flat and hyperbolic quotient 3-manifolds.
#[derive(Parser, Debug)]
#[command(name = "deckray", version, about)]
struct Args {
    /// Scene file path, or the name of a built-in scene
    /// (cornell_torus, mirrored_dodecahedron).
    #[arg(long)]
    scene: String,

    /// Image width in pixels.
    #[arg(long, default_value_t = 640)]
    width: u32,

    /// Image height in pixels.
    #[arg(long, default_value_t = 480)]
    height: u32,

    /// Samples per pixel.
    #[arg(long, default_value_t = 16)]
    spp: u32,

    /// Indirect bounce depth (0 = direct lighting only).
    #[arg(long, default_value_t = 5)]
    max_bounces: i32,

    /// Fundamental-domain crossings allowed per ray.
    #[arg(long, default_value_t = 8)]
    max_transport_level: u32,

    /// Random seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Disable the Monte Carlo indirect term (ambient approximation only).
    #[arg(long)]
    no_indirect: bool,

    /// Output PPM path.
    #[arg(short, long, default_value = "out.ppm")]
    output: PathBuf,

    /// Worker threads: a number or "auto".
    #[arg(long, default_value = "auto")]
    threads: String,
}

fn load_scene_text(choice: &str) -> Result<String, String> {
    let path = Path::new(choice);
    if path.exists() {
        return std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read scene file {}: {e}", path.display()));
    }
    if let Some((_, text)) = BUILTIN_SCENES.iter().find(|(name, _)| *name == choice) {
        return Ok(text.to_string());
    }
    Err(format!(
        "scene {choice:?} is neither a readable file nor a built-in scene \
         (built-ins: {})",
        BUILTIN_SCENES
            .iter()
            .map(|(n, _)| *n)
            .collect::<Vec<_>>()
            .join(", ")
    ))
}

fn run(args: &Args) -> Result<(), (u8, String)> {
    let threads = match args.threads.as_str() {
        "auto" => None,
        n => Some(n.parse::<usize>().map_err(|_| {
            (
                1,
                format!("--threads expects a number or \"auto\", got {n:?}"),
            )
        })?),
    };
    if args.width == 0 || args.height == 0 {
        return Err((1, "image dimensions must be positive".into()));
    }
    if args.spp == 0 {
        return Err((1, "--spp must be at least 1".into()));
    }
    if args.max_bounces < 0 {
        return Err((1, "--max-bounces must be non-negative".into()));
    }

    let text = load_scene_text(&args.scene).map_err(|e| (1, e))?;
    let scene = parse_scene(&text).map_err(|e| (1, e.to_string()))?;

    let settings = RenderSettings {
        spp: args.spp,
        max_bounces: args.max_bounces,
        max_transport_level: args.max_transport_level,
        seed: args.seed,
        indirect_enabled: !args.no_indirect,
    };
    let image = render_with_threads(&scene, &settings, args.width, args.height, threads);
    write_ppm(&image, &args.output)
        .map_err(|e| (2, format!("cannot write {}: {e}", args.output.display())))?;
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("deckray: {message}");
            ExitCode::from(code)
        }
    }
}
