//! Flat binary layout for fields on a centred grid.
//!
//! Header: `n_t`, `n_x` as `u64`, `theta_max`, `xi_max` as `f64`, all little
//! endian. Body: interleaved `re, im` as `f64`, τ-major.

use std::io::{Read, Write};

use num_complex::Complex;

use super::{Domain, GridSpec, Lattice, Offset, SpacetimeField};
use crate::error::{LabError, Result};
use crate::real::{lit, to_f64, Real};

pub const FIELD_HEADER_BYTES: usize = 32;

pub fn write_field<T: Real, W: Write>(field: &SpacetimeField<T>, mut out: W) -> Result<()> {
    let [nt, nx, ny] = field.window.shape;
    if nx != ny {
        return Err(LabError::InvalidGrid("non-square spatial window".into()));
    }
    let theta_max = to_f64(field.lattice.dtau) * nt as f64 / 2.0;
    let xi_max = to_f64(field.lattice.dxi) * nx as f64 / 2.0;
    let mut buf = Vec::with_capacity(FIELD_HEADER_BYTES + 16 * field.len());
    buf.extend_from_slice(&(nt as u64).to_le_bytes());
    buf.extend_from_slice(&(nx as u64).to_le_bytes());
    buf.extend_from_slice(&theta_max.to_le_bytes());
    buf.extend_from_slice(&xi_max.to_le_bytes());
    for v in &field.values {
        buf.extend_from_slice(&to_f64(v.re).to_le_bytes());
        buf.extend_from_slice(&to_f64(v.im).to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

/// Reads a field onto the canonical window of its header's grid spec.
pub fn read_field<T: Real, R: Read>(
    mut input: R,
    domain: Domain,
    tau_offset: Offset,
    xi_offset: Offset,
) -> Result<SpacetimeField<T>> {
    let mut head = [0u8; FIELD_HEADER_BYTES];
    input.read_exact(&mut head)?;
    let word = |i: usize| -> [u8; 8] { head[8 * i..8 * i + 8].try_into().unwrap() };
    let nt = u64::from_le_bytes(word(0)) as usize;
    let nx = u64::from_le_bytes(word(1)) as usize;
    let spec = GridSpec::new(
        nt,
        nx,
        lit::<T>(f64::from_le_bytes(word(2))),
        lit::<T>(f64::from_le_bytes(word(3))),
    );
    spec.validate()?;
    let lattice = Lattice {
        tau_offset,
        xi_offset,
        ..spec.lattice()
    };
    let mut field = SpacetimeField::zeros(lattice, spec.window(), domain);
    let mut body = vec![0u8; 16 * field.len()];
    input.read_exact(&mut body)?;
    for (v, chunk) in field.values.iter_mut().zip(body.chunks_exact(16)) {
        let re = f64::from_le_bytes(chunk[..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..].try_into().unwrap());
        *v = Complex::new(lit(re), lit(im));
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::make_grid;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = make_grid(GridSpec::new(4, 8, 2.0, 3.0)).unwrap();
        let f = SpacetimeField::from_fn(g.lattice, g.window, Domain::Frequency, |t, x| {
            Complex::new(f64::exp(t), x[0] / 3.0 - x[1])
        });
        let mut bytes = Vec::new();
        write_field(&f, &mut bytes).unwrap();
        assert_eq!(bytes.len(), FIELD_HEADER_BYTES + 16 * 256);
        let back: SpacetimeField<f64> =
            read_field(bytes.as_slice(), Domain::Frequency, Offset::Half, Offset::Half).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn truncated_input_errors() {
        let g = make_grid(GridSpec::new(2, 2, 1.0, 1.0)).unwrap();
        let mut bytes = Vec::new();
        write_field(&g.zeros(Domain::Physical), &mut bytes).unwrap();
        bytes.truncate(40);
        let r: Result<SpacetimeField<f64>> =
            read_field(bytes.as_slice(), Domain::Physical, Offset::Half, Offset::Half);
        assert!(r.is_err());
    }
}
