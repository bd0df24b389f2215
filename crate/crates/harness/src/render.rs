//! Plain PBM (`P1`) drawings of bond configurations.
//!
//! Pixel rows run from the top of the picture down, so row `y` of the
//! lattice is drawn upside down relative to the pixel grid. Set pixels (`1`)
//! are black.
//!
//! * Box `w x h`: the image is `(2w - 1) x (2h - 1)`. Vertex `(x, y)` is the
//!   pixel `(2x, 2(h - 1 - y))`; an open `Right(x, y)` sets the pixel just
//!   right of it and an open `Up(x, y)` the pixel just above it.
//! * Torus `n`: the image is `2n x 2n`. Vertex `(x, y)` is the pixel
//!   `(2x, 2(n - 1 - y) + 1)`; the extra last column holds the horizontal wrap
//!   edges and the extra top row the vertical wrap edges.

use std::fs;
use std::path::Path;

use planeperc_core::duality::dual;
use planeperc_core::lattice::{BondConfig, Dir, Region};

use crate::Result;

/// A black-and-white raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<bool>,
}

impl Bitmap {
    fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![false; width * height],
        }
    }

    pub fn get(&self, col: usize, row: usize) -> bool {
        self.pixels[row * self.width + col]
    }

    fn set(&mut self, col: usize, row: usize) {
        self.pixels[row * self.width + col] = true;
    }

    /// Plain PBM text, at most 70 characters per line.
    pub fn to_pbm(&self) -> String {
        let mut out = format!("P1\n{} {}\n", self.width, self.height);
        for row in self.pixels.chunks(self.width) {
            for chunk in row.chunks(70) {
                out.extend(chunk.iter().map(|&b| if b { '1' } else { '0' }));
                out.push('\n');
            }
        }
        out
    }
}

pub fn rasterize(config: &BondConfig) -> Bitmap {
    let region = *config.region();
    let (w, h) = (region.width(), region.height());
    let torus = region.is_torus();
    let (bw, bh) = if torus { (2 * w, 2 * h) } else { (2 * w - 1, 2 * h - 1) };
    let row_of = |y: usize| if torus { 2 * (h - 1 - y) + 1 } else { 2 * (h - 1 - y) };
    let mut bmp = Bitmap::new(bw, bh);
    for y in 0..h {
        for x in 0..w {
            bmp.set(2 * x, row_of(y));
        }
    }
    for i in 0..region.edge_count() {
        if !config.is_open(i) {
            continue;
        }
        let e = region.edge_at(i).expect("index below edge count");
        let (col, row) = (2 * e.base.x, row_of(e.base.y));
        match e.dir {
            Dir::Right => bmp.set(col + 1, row),
            Dir::Up => bmp.set(col, row - 1),
        }
    }
    bmp
}

pub fn render(config: &BondConfig, path: &Path) -> Result<()> {
    fs::write(path, rasterize(config).to_pbm())?;
    Ok(())
}

/// Writes the configuration and its geometric dual to two files.
pub fn render_with_dual(config: &BondConfig, primal: &Path, dual_path: &Path) -> Result<()> {
    render(config, primal)?;
    let d = dual(config)?.geometric();
    render(&d, dual_path)
}

/// Size of the image drawn for `region`.
pub fn image_size(region: &Region) -> (usize, usize) {
    let (w, h) = (region.width(), region.height());
    if region.is_torus() {
        (2 * w, 2 * h)
    } else {
        (2 * w - 1, 2 * h - 1)
    }
}
