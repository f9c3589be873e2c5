//! Bridge between circular shifts of `n × m` images and the diagonal action
//! of [`GroupSpec::shift`](super::GroupSpec::shift).
//!
//! The transform is the unitary 2D DFT
//! `X[u][v] = (nm)^{-1/2} Σ_{k,l} x[k][l] e^{-2πi(uk/n + vl/m)}`.
//! Frequency `(u, v)` is stored at signal position
//! `((u - 1) mod n)·m + ((v - 1) mod m)`, which puts the DC term last and
//! makes the exponents of that position equal `(u, v)`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::{GroupElement, Signal};
use crate::error::{Error, Result};

/// A row-major `rows × cols` complex image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Image {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Image {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!("empty image {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(rows * cols, data.len()));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidArgument("image contains non-finite values".into()));
        }
        Ok(Image { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        Image::new(rows, cols, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, k: usize, l: usize) -> Complex64 {
        self.data[k * self.cols + l]
    }

    /// The permutation action of `(i, j)`: `y[k][l] = x[(k+i) mod n][(l+j) mod m]`.
    pub fn shifted(&self, i: usize, j: usize) -> Image {
        let (n, m) = (self.rows, self.cols);
        let mut data = Vec::with_capacity(n * m);
        for k in 0..n {
            for l in 0..m {
                data.push(self.get((k + i) % n, (l + j) % m));
            }
        }
        Image {
            rows: n,
            cols: m,
            data,
        }
    }

    /// [`Self::shifted`] by a two-generator group element.
    pub fn shifted_by(&self, g: &GroupElement) -> Result<Image> {
        match g.powers() {
            &[i, j] => Ok(self.shifted(i as usize, j as usize)),
            other => Err(Error::dims(2, other.len())),
        }
    }

    pub fn max_abs_diff(&self, other: &Image) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Signal position of frequency `(u, v)`.
pub fn fourier_position(n: usize, m: usize, u: usize, v: usize) -> usize {
    ((u + n - 1) % n) * m + (v + m - 1) % m
}

/// Unitary 2D DFT of `image`, laid out as a signal of length `nm`.
pub fn to_fourier(image: &Image) -> Signal {
    let (n, m) = (image.rows, image.cols);
    let spectrum = dft2(n, m, &image.data, false);
    let mut entries = vec![Complex64::new(0.0, 0.0); n * m];
    for u in 0..n {
        for v in 0..m {
            entries[fourier_position(n, m, u, v)] = spectrum[u * m + v];
        }
    }
    Signal(entries)
}

/// Inverse of [`to_fourier`].
pub fn from_fourier(signal: &Signal, n: usize, m: usize) -> Result<Image> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!("empty image {n}x{m}")));
    }
    if signal.len() != n * m {
        return Err(Error::dims(n * m, signal.len()));
    }
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n * m];
    for u in 0..n {
        for v in 0..m {
            spectrum[u * m + v] = signal[fourier_position(n, m, u, v)];
        }
    }
    Image::new(n, m, dft2(n, m, &spectrum, true))
}

fn dft2(n: usize, m: usize, data: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let mut planner = FftPlanner::<f64>::new();
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(m), planner.plan_fft_inverse(n))
    } else {
        (planner.plan_fft_forward(m), planner.plan_fft_forward(n))
    };

    let mut buf = data.to_vec();
    for row in buf.chunks_exact_mut(m) {
        row_fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for l in 0..m {
        for k in 0..n {
            column[k] = buf[k * m + l];
        }
        col_fft.process(&mut column);
        for k in 0..n {
            buf[k * m + l] = column[k];
        }
    }
    let scale = 1.0 / ((n * m) as f64).sqrt();
    buf.iter_mut().for_each(|z| *z *= scale);
    buf
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::GroupSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_image(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Image {
        let data = (0..n * m)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        Image::new(n, m, data).unwrap()
    }

    #[test]
    fn constant_image_has_only_dc() {
        let img = Image::from_real(2, 2, &[1.0; 4]).unwrap();
        let x = to_fourier(&img);
        let dc = fourier_position(2, 2, 0, 0);
        assert_eq!(dc, 3);
        for (k, z) in x.iter().enumerate() {
            if k == dc {
                assert!((z - Complex64::new(2.0, 0.0)).norm() < 1e-14);
            } else {
                assert!(z.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let img = random_image(&mut rng, 3, 4);
        let back = from_fourier(&to_fourier(&img), 3, 4).unwrap();
        let scale = img.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(img.max_abs_diff(&back) <= 1e-12 * scale);
    }

    #[test]
    fn shift_matches_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (n, m) = (3, 4);
        let group = GroupSpec::shift(n, m).unwrap();
        let img = random_image(&mut rng, n, m);
        let x = to_fourier(&img);
        for g in group.elements().unwrap() {
            let shifted = to_fourier(&img.shifted_by(&g).unwrap());
            let acted = group.act(&g, &x).unwrap();
            assert!(shifted.distance(&acted) < 1e-12, "mismatch for {g}");
        }
    }

    #[test]
    fn dimension_checks() {
        assert!(from_fourier(&Signal::zeros(5), 2, 3).is_err());
        assert!(Image::new(2, 2, vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }
}
