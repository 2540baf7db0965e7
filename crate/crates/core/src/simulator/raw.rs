//! Raw binary capture format.
//!
//! Layout mimics a capture card dump: little-endian signed 16-bit I then Q,
//! antenna axis fastest, then ADC sample, then chirp, then frame. No header;
//! the reader derives the frame count from the file length and the chirp
//! configuration. File size is `frames * chirps * samples * antennas * 4`
//! bytes.

use crate::error::{Error, Result};
use crate::simulator::{ChirpConfig, IqCube};
use num_complex::Complex64;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const FULL_SCALE: f64 = 32767.0;
/// Headroom factor: full scale maps to 1.5x the cube's peak component.
const HEADROOM: f64 = 1.5;

/// Quantize and write a cube. Full-scale is pinned to 1.5x the largest
/// I or Q component, so the quantization floor is explicit and no sample
/// clips. Values already on the integer grid (e.g. a cube read back from
/// disk) survive a write/read cycle bit-exactly.
pub fn write_raw(cube: &IqCube, path: &Path) -> Result<()> {
    if !cube.is_finite() {
        return Err(Error::NonFinite("raw capture write"));
    }
    let peak = cube
        .data
        .iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0_f64, f64::max);
    let lsb = if peak > 0.0 {
        HEADROOM * peak / FULL_SCALE
    } else {
        1.0
    };

    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    let mut buf = [0u8; 4];
    for z in &cube.data {
        let i = quantize(z.re, lsb)?;
        let q = quantize(z.im, lsb)?;
        buf[..2].copy_from_slice(&i.to_le_bytes());
        buf[2..].copy_from_slice(&q.to_le_bytes());
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

fn quantize(v: f64, lsb: f64) -> Result<i16> {
    let q = (v / lsb).round();
    if q.abs() > FULL_SCALE {
        return Err(Error::SampleOutOfRange { value: v });
    }
    Ok(q as i16)
}

/// Read a raw capture back as ADC counts.
///
/// The format carries no scale header, so samples are returned as the raw
/// integer counts (in f64). The processing pipeline is invariant to uniform
/// amplitude scaling, so counts are directly usable.
pub fn read_raw(path: &Path, cfg: &ChirpConfig) -> Result<IqCube> {
    cfg.validate()?;
    let frame_bytes = (IqCube::samples_per_frame(cfg) * 4) as u64;
    let len = std::fs::metadata(path)?.len();
    if len == 0 || len % frame_bytes != 0 {
        return Err(Error::DimensionMismatch {
            expected: frame_bytes,
            actual: len,
        });
    }
    let frames = (len / frame_bytes) as usize;

    let file = std::fs::File::open(path)?;
    let mut r = BufReader::new(file);
    let mut data = Vec::with_capacity(frames * IqCube::samples_per_frame(cfg));
    let mut buf = [0u8; 4];
    for _ in 0..frames * IqCube::samples_per_frame(cfg) {
        r.read_exact(&mut buf)?;
        let i = i16::from_le_bytes([buf[0], buf[1]]);
        let q = i16::from_le_bytes([buf[2], buf[3]]);
        data.push(Complex64::new(i as f64, q as f64));
    }
    Ok(IqCube {
        data,
        frames,
        config: *cfg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanics::presets;
    use crate::simulator::{synthesize_cube, NoiseSpec, Scatterer, SceneSpec};

    fn test_cfg() -> ChirpConfig {
        ChirpConfig {
            chirps_per_frame: 4,
            adc_samples: 32,
            ..ChirpConfig::default()
        }
    }

    fn seeded_cube() -> IqCube {
        let cfg = test_cfg();
        let scene = SceneSpec::new(
            vec![
                Scatterer::static_at(1.2, 2.0),
                Scatterer::vibrating(0.5, 1.0, presets::watered(1e-3, 0.0)),
            ],
            3.0 * cfg.frame_period_s,
        );
        synthesize_cube(&scene, &cfg, &NoiseSpec::thermal(25.0), 11).unwrap()
    }

    #[test]
    fn file_size_is_four_bytes_per_sample() {
        let cube = seeded_cube();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cap.bin");
        write_raw(&cube, &path).unwrap();
        let expected = cube.frames
            * cube.config.chirps_per_frame
            * cube.config.adc_samples
            * cube.config.virtual_antennas()
            * 4;
        assert_eq!(std::fs::metadata(&path).unwrap().len(), expected as u64);
    }

    #[test]
    fn count_grid_round_trip_is_bit_exact() {
        let cube = seeded_cube();
        let dir = tempfile::tempdir().unwrap();
        let p1 = dir.path().join("a.bin");
        let p2 = dir.path().join("b.bin");
        write_raw(&cube, &p1).unwrap();
        // First read lands on the integer count grid; from there the
        // write/read pair is the identity.
        let counts = read_raw(&p1, &cube.config).unwrap();
        write_raw(&counts, &p2).unwrap();
        let again = read_raw(&p2, &cube.config).unwrap();
        assert_eq!(counts, again);
    }

    #[test]
    fn quantization_error_is_below_one_lsb() {
        let cube = seeded_cube();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cap.bin");
        write_raw(&cube, &path).unwrap();
        let counts = read_raw(&path, &cube.config).unwrap();
        let peak = cube
            .data
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0_f64, f64::max);
        let lsb = 1.5 * peak / 32767.0;
        for (orig, count) in cube.data.iter().zip(&counts.data) {
            assert!((orig.re - count.re * lsb).abs() <= 0.5 * lsb + 1e-12);
            assert!((orig.im - count.im * lsb).abs() <= 0.5 * lsb + 1e-12);
        }
    }

    #[test]
    fn wrong_adc_samples_is_dimension_mismatch() {
        let cube = seeded_cube();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cap.bin");
        write_raw(&cube, &path).unwrap();
        let wrong = ChirpConfig {
            adc_samples: 100,
            ..test_cfg()
        };
        assert!(matches!(
            read_raw(&path, &wrong),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn truncated_file_is_rejected() {
        let cube = seeded_cube();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cap.bin");
        write_raw(&cube, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(matches!(
            read_raw(&path, &cube.config),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn non_finite_samples_are_rejected() {
        let mut cube = seeded_cube();
        cube.data[5] = Complex64::new(f64::NAN, 0.0);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cap.bin");
        assert!(matches!(
            write_raw(&cube, &path),
            Err(Error::NonFinite(_))
        ));
    }
}
