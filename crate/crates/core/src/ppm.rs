//! Binary PPM (P6) output with gamma mapping.

use crate::render::Image;
use std::io::{self, Write};
use std::path::Path;

const GAMMA: f64 = 2.2;

/// Maps a linear channel value to its 8-bit encoding:
/// clamp to [0,1], apply the 1/2.2 gamma curve, scale to 0-255 and round
/// half up. Bit-exact across platforms.
pub fn encode_channel(c: f64) -> u8 {
    let c = c.clamp(0.0, 1.0);
    let g = c.powf(1.0 / GAMMA);
    (g * 255.0 + 0.5).floor() as u8
}

/// Serializes the image as binary P6 bytes.
pub fn to_ppm_bytes(image: &Image) -> Vec<u8> {
    let mut out = Vec::with_capacity(32 + image.data.len() * 3);
    out.extend_from_slice(format!("P6\n{} {}\n255\n", image.width, image.height).as_bytes());
    for c in &image.data {
        out.push(encode_channel(c.r));
        out.push(encode_channel(c.g));
        out.push(encode_channel(c.b));
    }
    out
}

pub fn write_ppm(image: &Image, path: &Path) -> io::Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(&to_ppm_bytes(image))?;
    file.flush()
}
