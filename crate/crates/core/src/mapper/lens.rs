use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{MapperError, PointCloud};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LensKind {
    /// Projection onto one coordinate.
    Coordinate { index: usize },
    /// Sum of all coordinates.
    CoordSum,
    L2Norm,
    /// Score on the first principal component.
    Pca1,
    /// Projection onto a named column of a CSV-backed cloud.
    CsvColumn { name: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Affine map of `[min, max]` onto `[0, 1]`.
    #[default]
    Minmax,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LensVector {
    pub values: Vec<f64>,
    pub kind: LensKind,
    pub normalization: Normalization,
}

impl LensVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn apply_lens(cloud: &PointCloud, kind: &LensKind, normalization: Normalization) -> Result<LensVector, MapperError> {
    let mut values: Vec<f64> = match kind {
        LensKind::Coordinate { index } => coordinate(cloud, *index)?,
        LensKind::CoordSum => cloud.rows().map(|p| p.iter().sum()).collect(),
        LensKind::L2Norm => cloud.rows().map(|p| p.iter().map(|x| x * x).sum::<f64>().sqrt()).collect(),
        LensKind::Pca1 => pca1(cloud)?,
        LensKind::CsvColumn { name } => {
            let index = cloud
                .column_names
                .as_ref()
                .and_then(|names| names.iter().position(|c| c == name))
                .ok_or_else(|| MapperError::UnknownColumn(name.clone()))?;
            coordinate(cloud, index)?
        }
    };
    if normalization == Normalization::Minmax {
        let (lo, hi) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        if !(hi > lo) {
            return Err(MapperError::DegenerateNormalization);
        }
        let span = hi - lo;
        for v in &mut values {
            *v = ((*v - lo) / span).clamp(0.0, 1.0);
        }
    }
    Ok(LensVector {
        values,
        kind: kind.clone(),
        normalization,
    })
}

fn coordinate(cloud: &PointCloud, index: usize) -> Result<Vec<f64>, MapperError> {
    if index >= cloud.dim() {
        return Err(MapperError::CoordinateOutOfRange {
            index,
            dim: cloud.dim(),
        });
    }
    Ok(cloud.rows().map(|p| p[index]).collect())
}

/// Projection of the centred points onto the leading eigenvector of the
/// covariance matrix. The sign is fixed by making the first nonzero loading
/// positive.
fn pca1(cloud: &PointCloud) -> Result<Vec<f64>, MapperError> {
    let n = cloud.len();
    let d = cloud.dim();
    if n < 2 {
        return Err(MapperError::TooFewPoints { n, needed: 2 });
    }
    let mut mean = vec![0.0; d];
    for p in cloud.rows() {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centred = DMatrix::from_fn(n, d, |i, j| cloud.point(i)[j] - mean[j]);
    let cov = (centred.transpose() * &centred) / (n as f64 - 1.0);
    let eig = SymmetricEigen::new(cov);
    let top = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > eig.eigenvalues[best] { i } else { best });
    let mut axis: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    let scale = axis.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if let Some(first) = axis.iter().find(|x| x.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        if *first < 0.0 {
            axis.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok((0..n)
        .map(|i| centred.row(i).iter().zip(&axis).map(|(a, b)| a * b).sum())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn cloud(rows: Vec<Vec<f64>>) -> PointCloud {
        PointCloud::from_rows(rows).unwrap()
    }

    #[test]
    fn coordinate_minmax() {
        let c = cloud(vec![vec![0.0, 5.0], vec![1.0, 5.0], vec![2.0, 5.0]]);
        let lens = apply_lens(&c, &LensKind::Coordinate { index: 0 }, Normalization::Minmax).unwrap();
        assert_eq!(lens.values, vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn l2_norm_raw() {
        let c = cloud(vec![vec![3.0, 4.0]]);
        let lens = apply_lens(&c, &LensKind::L2Norm, Normalization::None).unwrap();
        assert_eq!(lens.values, vec![5.0]);
    }

    #[test]
    fn coord_sum() {
        let c = cloud(vec![vec![1.0, 2.0], vec![-1.0, 0.5]]);
        let lens = apply_lens(&c, &LensKind::CoordSum, Normalization::None).unwrap();
        assert_eq!(lens.values, vec![3.0, -0.5]);
    }

    #[test]
    fn degenerate_normalization() {
        let c = cloud(vec![vec![0.0, 5.0], vec![1.0, 5.0]]);
        let err = apply_lens(&c, &LensKind::Coordinate { index: 1 }, Normalization::Minmax).unwrap_err();
        assert_eq!(err, MapperError::DegenerateNormalization);
        assert!(apply_lens(&c, &LensKind::Coordinate { index: 1 }, Normalization::None).is_ok());
    }

    #[test]
    fn coordinate_out_of_range() {
        let c = cloud(vec![vec![0.0, 5.0]]);
        assert!(matches!(
            apply_lens(&c, &LensKind::Coordinate { index: 2 }, Normalization::None),
            Err(MapperError::CoordinateOutOfRange { index: 2, dim: 2 })
        ));
    }

    #[test]
    fn csv_column_lookup() {
        let mut c = cloud(vec![vec![0.0, 5.0], vec![1.0, 7.0]]);
        c.column_names = Some(vec!["x".into(), "y".into()]);
        let lens = apply_lens(&c, &LensKind::CsvColumn { name: "y".into() }, Normalization::None).unwrap();
        assert_eq!(lens.values, vec![5.0, 7.0]);
        assert!(apply_lens(&c, &LensKind::CsvColumn { name: "z".into() }, Normalization::None).is_err());
    }

    #[test]
    fn pca_recovers_diagonal_axis() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let major = Normal::new(0.0, 3.0).unwrap();
        let minor = Normal::new(0.0, 0.2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut truth = Vec::new();
        let rows: Vec<Vec<f64>> = (0..2000)
            .map(|_| {
                let (a, b) = (major.sample(&mut rng), minor.sample(&mut rng));
                truth.push(a);
                vec![h * a - h * b, h * a + h * b]
            })
            .collect();
        let lens = apply_lens(&cloud(rows), &LensKind::Pca1, Normalization::None).unwrap();
        let r = pearson(&lens.values, &truth);
        assert!(r > 0.999, "r = {r}");
    }

    fn pearson(a: &[f64], b: &[f64]) -> f64 {
        let n = a.len() as f64;
        let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
        let cov: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
        let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
        let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
        cov / (va * vb).sqrt()
    }
}
