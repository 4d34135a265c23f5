//! Tiled, deterministic parallel rendering.
//!
//! Pixels own their RNG streams (keyed by pixel and sample index), so the
//! image is bit-identical for any worker count or scheduling order. Tiles
//! are rendered into private buffers by a work-stealing pool and assembled
//! afterwards; no two tiles share pixels.

use crate::camera::generate_camera_ray;
use crate::color::Rgb;
use crate::integrator::{radiance, sample_rng, RenderSettings};
use crate::scene::Scene;
use crate::tracer::trace_ray;
use rand::Rng;
use rayon::prelude::*;

pub const TILE_SIZE: u32 = 16;

/// Row-major linear-RGB image buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: u32,
    pub height: u32,
    pub data: Vec<Rgb>,
}

impl Image {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            data: vec![Rgb::BLACK; (width * height) as usize],
        }
    }

    pub fn pixel(&self, i: u32, j: u32) -> Rgb {
        self.data[(j * self.width + i) as usize]
    }

    pub fn mean_luminance(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().map(|c| c.luminance()).sum::<f64>() / self.data.len() as f64
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|c| c.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Tile {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

/// Partition of the image into tiles; covers every pixel exactly once.
pub fn tiles(width: u32, height: u32) -> Vec<Tile> {
    let mut out = Vec::new();
    let mut y0 = 0;
    while y0 < height {
        let y1 = (y0 + TILE_SIZE).min(height);
        let mut x0 = 0;
        while x0 < width {
            let x1 = (x0 + TILE_SIZE).min(width);
            out.push(Tile { x0, y0, x1, y1 });
            x0 = x1;
        }
        y0 = y1;
    }
    out
}

/// Renders the scene with spp-averaged stratified jitter per pixel.
pub fn render(scene: &Scene, settings: &RenderSettings, width: u32, height: u32) -> Image {
    let mut image = Image::new(width, height);
    let rendered: Vec<(Tile, Vec<Rgb>)> = tiles(width, height)
        .into_par_iter()
        .map(|tile| (tile, render_tile(scene, settings, width, height, &tile)))
        .collect();
    for (tile, pixels) in rendered {
        let mut k = 0;
        for j in tile.y0..tile.y1 {
            for i in tile.x0..tile.x1 {
                image.data[(j * width + i) as usize] = pixels[k];
                k += 1;
            }
        }
    }
    image
}

/// Renders with an explicit worker count (None = library default pool).
pub fn render_with_threads(
    scene: &Scene,
    settings: &RenderSettings,
    width: u32,
    height: u32,
    threads: Option<usize>,
) -> Image {
    match threads {
        None => render(scene, settings, width, height),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .expect("worker pool")
            .install(|| render(scene, settings, width, height)),
    }
}

fn render_tile(
    scene: &Scene,
    settings: &RenderSettings,
    width: u32,
    height: u32,
    tile: &Tile,
) -> Vec<Rgb> {
    let mut out = Vec::with_capacity(((tile.x1 - tile.x0) * (tile.y1 - tile.y0)) as usize);
    // Stratify the pixel jitter when spp is a perfect square.
    let strata = (settings.spp as f64).sqrt() as u32;
    let stratified = strata * strata == settings.spp;
    for j in tile.y0..tile.y1 {
        for i in tile.x0..tile.x1 {
            let pixel_index = (j * width + i) as u64;
            let mut acc = Rgb::BLACK;
            for s in 0..settings.spp {
                let mut rng = sample_rng(settings.seed, pixel_index, s as u64);
                let (ju, jv): (f64, f64) = (rng.gen(), rng.gen());
                let (u, v) = if stratified {
                    let sx = s % strata;
                    let sy = s / strata;
                    (
                        (sx as f64 + ju) / strata as f64,
                        (sy as f64 + jv) / strata as f64,
                    )
                } else {
                    (ju, jv)
                };
                let ray = generate_camera_ray(&scene.camera, width, height, i, j, u, v);
                acc += radiance(scene, &ray.origin, &ray.dir, settings, &mut rng);
            }
            out.push(acc / settings.spp as f64);
        }
    }
    out
}

/// Transport levels of the primary hits along one scanline, rendered with
/// centered rays; `None` marks pixels whose ray escaped. Used to inspect
/// how many domain copies deep the visible surfaces sit.
pub fn scanline_transport_levels(
    scene: &Scene,
    settings: &RenderSettings,
    width: u32,
    height: u32,
    row: u32,
) -> Vec<Option<u32>> {
    (0..width)
        .map(|i| {
            let ray = generate_camera_ray(&scene.camera, width, height, i, row, 0.5, 0.5);
            trace_ray(scene, &ray.origin, &ray.dir, settings.max_transport_level)
                .map(|hit| hit.transport_level)
        })
        .collect()
}
