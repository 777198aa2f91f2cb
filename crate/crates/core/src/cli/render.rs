use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{ComplexPoint, LogModel};

/// Escape-time picture settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderSpec {
    /// `[xmin, xmax, ymin, ymax]`.
    pub viewport: [f64; 4],
    pub width: usize,
    pub height: usize,
    pub r: f64,
    pub depth: usize,
    /// Pixels are log coordinates `z`, iterated at `w = e^z`.
    pub log_plane: bool,
}

/// Gray level of one starting point: black when `|f^j(w)| ≥ R` for every
/// `j = 1..=depth`, otherwise lighter the earlier the orbit drops below `R`.
pub fn escape_gray(model: &LogModel, w0: ComplexPoint, r: f64, depth: usize) -> u8 {
    let mut w = w0;
    for j in 1..=depth {
        w = match model.eval_f(w) {
            Ok(next) => next,
            // The orbit is already beyond any representable bound.
            Err(_) if w.norm() >= r => return 0,
            Err(_) => return 255,
        };
        if !(w.norm() >= r) {
            let shade = 255.0 * (j - 1) as f64 / depth as f64;
            return 255 - shade.round() as u8;
        }
    }
    0
}

/// Binary PPM (`P6`, maxval 255), rows top to bottom. Pixel `(col, row)`
/// samples its top-left corner `(xmin + col·Δx, ymax − row·Δy)`, so grid
/// lines through the origin, where the real axis lies, are hit exactly.
pub fn render_ppm(model: &LogModel, spec: &RenderSpec) -> Result<Vec<u8>> {
    let [x0, x1, y0, y1] = spec.viewport;
    if !(x1 > x0 && y1 > y0) || !spec.viewport.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument(format!("viewport {:?} has zero area", spec.viewport)));
    }
    if spec.width == 0 || spec.height == 0 {
        return Err(Error::InvalidArgument("image size must be positive".into()));
    }
    if !(spec.r > 0.0) || spec.depth == 0 {
        return Err(Error::InvalidArgument("R and depth must be positive".into()));
    }
    let (w, h) = (spec.width as f64, spec.height as f64);
    let rows: Vec<Vec<u8>> = (0..spec.height)
        .into_par_iter()
        .map(|row| {
            let y = y1 - row as f64 * (y1 - y0) / h;
            let mut line = Vec::with_capacity(3 * spec.width);
            for col in 0..spec.width {
                let p = ComplexPoint::new(x0 + col as f64 * (x1 - x0) / w, y);
                let w = if spec.log_plane { p.exp() } else { p };
                let g = escape_gray(model, w, spec.r, spec.depth);
                line.extend_from_slice(&[g, g, g]);
            }
            line
        })
        .collect();
    let mut out = format!("P6\n{} {}\n255\n", spec.width, spec.height).into_bytes();
    for line in rows {
        out.extend_from_slice(&line);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter() -> LogModel {
        LogModel::exp_default(0.25).unwrap()
    }

    fn spec() -> RenderSpec {
        RenderSpec { viewport: [-2.0, 6.0, -3.0, 3.0], width: 400, height: 300, r: 4.0, depth: 40, log_plane: false }
    }

    fn pixel(img: &[u8], col: usize, row: usize) -> u8 {
        img["P6\n400 300\n255\n".len() + 3 * (row * 400 + col)]
    }

    #[test]
    fn escaping_point_is_black() {
        let img = render_ppm(&quarter(), &spec()).unwrap();
        assert!(img.starts_with(b"P6\n400 300\n255\n"));
        assert_eq!(img.len(), 15 + 3 * 400 * 300);
        assert_eq!(pixel(&img, 250, 150), 0);
        // Just off the axis the orbit turns and falls below R.
        assert_ne!(pixel(&img, 250, 149), 0);
        assert_eq!(escape_gray(&quarter(), ComplexPoint::new(3.0, 0.0), 4.0, 40), 0);
    }

    #[test]
    fn origin_is_white() {
        let s = RenderSpec { viewport: [0.0, 1.0, -1.0, 0.0], width: 1, height: 1, ..spec() };
        let img = render_ppm(&quarter(), &s).unwrap();
        assert_eq!(img, b"P6\n1 1\n255\n\xff\xff\xff");
    }

    #[test]
    fn gray_levels_follow_escape_depth() {
        let m = quarter();
        // 0.25e^{1.8} ≈ 1.51 < 4: the orbit drops below R at once.
        assert_eq!(escape_gray(&m, ComplexPoint::new(1.8, 0.0), 4.0, 40), 255);
        // 0.25e^{2.9} ≈ 4.55, then 0.25e^{4.55} ≈ 23.6, then far out.
        assert_eq!(escape_gray(&m, ComplexPoint::new(2.9, 0.0), 4.0, 40), 0);
        // |f| = 0.25e^{2.8} ≈ 4.11 with Re f ≈ −4.07, so |f²| ≈ 0.004: drops at j = 2.
        assert_eq!(escape_gray(&m, ComplexPoint::new(2.8, 3.0), 4.0, 40), 255 - 6);
    }

    #[test]
    fn degenerate_viewports_are_rejected() {
        let s = RenderSpec { viewport: [1.0, 1.0, -1.0, 1.0], ..spec() };
        assert!(matches!(render_ppm(&quarter(), &s), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn log_plane_matches_f_plane_at_the_image_point() {
        let m = quarter();
        let z = ComplexPoint::new(1.1, 0.0);
        let s = RenderSpec { viewport: [1.1, 1.2, -0.1, 0.0], width: 1, height: 1, log_plane: true, ..spec() };
        let img = render_ppm(&m, &s).unwrap();
        assert_eq!(*img.last().unwrap(), escape_gray(&m, z.exp(), 4.0, 40));
    }
}
