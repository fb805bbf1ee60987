use super::{CellIndex, GeometryError, Region, Vec2};

/// Edge samples per bounding-box diagonal.
const SAMPLES_PER_DIAMETER: f64 = 256.0;

/// Points of `r` used to approximate the supremum in the directed distance:
/// all cell vertices plus a densification of every cell edge.
fn samples(r: &Region, spacing: f64) -> Vec<Vec2> {
    let mut out = Vec::new();
    for c in r.cells() {
        for (a, b) in c.edges() {
            out.push(a);
            let steps = (a.dist(b) / spacing).ceil() as usize;
            for k in 1..steps {
                out.push(a.lerp(b, k as f64 / steps as f64));
            }
        }
    }
    out
}

/// `sup_{a ∈ A} dist(a, B)`, sampled on vertices and densified edges of `A`.
pub fn directed_hausdorff(a: &Region, b: &Region) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptyRegion);
    }
    let spacing = a.diameter().max(b.diameter()) / SAMPLES_PER_DIAMETER;
    let index = CellIndex::new(b.cells());
    Ok(samples(a, spacing)
        .into_iter()
        .map(|p| index.distance_to(p))
        .fold(0.0, f64::max))
}

/// Symmetric Hausdorff distance between two non-empty regions.
pub fn hausdorff_distance(a: &Region, b: &Region) -> Result<f64, GeometryError> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_on_self_and_translation_distance() {
        let s = Region::rect(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(hausdorff_distance(&s, &s).unwrap(), 0.0);
        for t in [0.1, 0.5, 2.0] {
            let m = s.translate(Vec2::new(t, 0.0));
            let d = hausdorff_distance(&s, &m).unwrap();
            assert!((d - t).abs() < 1e-12, "t={t} d={d}");
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        let s = Region::rect(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(
            hausdorff_distance(&s, &Region::empty()),
            Err(GeometryError::EmptyRegion)
        );
    }
}
