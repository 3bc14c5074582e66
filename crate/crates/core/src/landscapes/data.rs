//! Synthetic classification data with label-noise injection.
//!
//! Class-conditional Gaussian blobs around fixed centers; noise substitutes a
//! prescribed fraction of the training labels with uniformly random *other*
//! classes. Everything is deterministic under the seed, and datasets
//! round-trip through a columnar plain-text format for reproducibility audits.

use crate::error::{Result, TsamError};
use crate::rng::{root_rng, standard_normal};
use rand::Rng;
use std::io::{BufRead, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Validation,
    Test,
}

impl Split {
    pub fn tag(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Validation => "validation",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub features_dim: usize,
    pub classes: usize,
    pub noise_fraction: f64,
    /// Row-major `n x d` feature blocks per split.
    pub train_x: Vec<f64>,
    pub val_x: Vec<f64>,
    pub test_x: Vec<f64>,
    /// Possibly noise-corrupted training labels (the ones a model trains on).
    pub train_y: Vec<usize>,
    /// Ground-truth training labels before noise injection.
    pub train_y_clean: Vec<usize>,
    pub val_y: Vec<usize>,
    pub test_y: Vec<usize>,
}

impl SyntheticDataset {
    pub fn n_train(&self) -> usize {
        self.train_y.len()
    }

    pub fn features(&self, split: Split) -> &[f64] {
        match split {
            Split::Train => &self.train_x,
            Split::Validation => &self.val_x,
            Split::Test => &self.test_x,
        }
    }

    pub fn labels(&self, split: Split) -> &[usize] {
        match split {
            Split::Train => &self.train_y,
            Split::Validation => &self.val_y,
            Split::Test => &self.test_y,
        }
    }

    /// Count of training labels that differ from ground truth.
    pub fn flipped_count(&self) -> usize {
        self.train_y
            .iter()
            .zip(&self.train_y_clean)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Columnar plain text: header row, comma-separated, features then label.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)
            .map_err(|e| TsamError::io(path.display().to_string(), e))?;
        let mut w = std::io::BufWriter::new(file);
        let mut write = |res: std::io::Result<()>| -> Result<()> {
            res.map_err(|e| TsamError::io(path.display().to_string(), e))
        };
        let mut header = String::from("split");
        for j in 0..self.features_dim {
            header.push_str(&format!(",x{j}"));
        }
        header.push_str(",label,clean_label");
        write(writeln!(w, "{header}"))?;
        let mut dump = |split: Split, xs: &[f64], ys: &[usize], clean: Option<&[usize]>| {
            let d = self.features_dim;
            let mut out = Ok(());
            for (i, y) in ys.iter().enumerate() {
                let mut row = String::from(split.tag());
                for j in 0..d {
                    row.push_str(&format!(",{}", xs[i * d + j]));
                }
                let cl = clean.map(|c| c[i]).unwrap_or(*y);
                row.push_str(&format!(",{y},{cl}"));
                if let Err(e) = writeln!(w, "{row}") {
                    out = Err(TsamError::io(path.display().to_string(), e));
                    break;
                }
            }
            out
        };
        dump(Split::Train, &self.train_x, &self.train_y, Some(&self.train_y_clean))?;
        dump(Split::Validation, &self.val_x, &self.val_y, None)?;
        dump(Split::Test, &self.test_x, &self.test_y, None)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| TsamError::io(path.display().to_string(), e))?;
        let reader = std::io::BufReader::new(file);
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| TsamError::InvalidParameter("empty dataset file".into()))?
            .map_err(|e| TsamError::io(path.display().to_string(), e))?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < 4 || cols[0] != "split" {
            return Err(TsamError::InvalidParameter(format!(
                "unrecognized dataset header: {header}"
            )));
        }
        let d = cols.len() - 3;
        let mut ds = SyntheticDataset {
            features_dim: d,
            classes: 0,
            noise_fraction: 0.0,
            train_x: vec![],
            val_x: vec![],
            test_x: vec![],
            train_y: vec![],
            train_y_clean: vec![],
            val_y: vec![],
            test_y: vec![],
        };
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(|e| TsamError::io(path.display().to_string(), e))?;
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != d + 3 {
                return Err(TsamError::InvalidParameter(format!(
                    "line {}: expected {} fields, got {}",
                    lineno + 2,
                    d + 3,
                    parts.len()
                )));
            }
            let parse_f = |s: &str| {
                s.parse::<f64>().map_err(|_| {
                    TsamError::InvalidParameter(format!("line {}: bad float {s}", lineno + 2))
                })
            };
            let parse_u = |s: &str| {
                s.parse::<usize>().map_err(|_| {
                    TsamError::InvalidParameter(format!("line {}: bad label {s}", lineno + 2))
                })
            };
            let label = parse_u(parts[d + 1])?;
            let clean = parse_u(parts[d + 2])?;
            ds.classes = ds.classes.max(label + 1).max(clean + 1);
            let xs: Result<Vec<f64>> = parts[1..=d].iter().map(|s| parse_f(s)).collect();
            let xs = xs?;
            match parts[0] {
                "train" => {
                    ds.train_x.extend(xs);
                    ds.train_y.push(label);
                    ds.train_y_clean.push(clean);
                }
                "validation" => {
                    ds.val_x.extend(xs);
                    ds.val_y.push(label);
                }
                "test" => {
                    ds.test_x.extend(xs);
                    ds.test_y.push(label);
                }
                other => {
                    return Err(TsamError::InvalidParameter(format!(
                        "line {}: unknown split {other}",
                        lineno + 2
                    )))
                }
            }
        }
        let flipped = ds.flipped_count();
        if ds.n_train() > 0 {
            ds.noise_fraction = flipped as f64 / ds.n_train() as f64;
        }
        Ok(ds)
    }
}

/// Fixed blob center for class `c`: on a circle of radius 3 in the first two
/// coordinates (or spaced on a line when d == 1). Centers do not depend on the
/// seed, only draws around them do.
fn blob_center(c: usize, classes: usize, d: usize) -> Vec<f64> {
    let mut center = vec![0.0; d];
    if d == 1 {
        center[0] = 3.0 * (c as f64 - (classes as f64 - 1.0) / 2.0);
    } else {
        let angle = 2.0 * std::f64::consts::PI * c as f64 / classes as f64;
        center[0] = 3.0 * angle.cos();
        center[1] = 3.0 * angle.sin();
    }
    center
}

/// Class-conditional unit-variance Gaussian blobs. `n` is the training-set
/// size; validation and test sets of `n/4` and `n/2` points are drawn from the
/// same distribution (1000 train -> 250 validation / 500 test).
pub fn make_synthetic_classification(
    n: usize,
    d: usize,
    classes: usize,
    seed: u64,
) -> Result<SyntheticDataset> {
    if n == 0 || d == 0 || classes < 2 {
        return Err(TsamError::InvalidParameter(format!(
            "need n >= 1, d >= 1, classes >= 2; got n={n}, d={d}, classes={classes}"
        )));
    }
    let mut rng = root_rng(seed);
    let centers: Vec<Vec<f64>> = (0..classes).map(|c| blob_center(c, classes, d)).collect();
    let mut draw = |count: usize| {
        let mut xs = Vec::with_capacity(count * d);
        let mut ys = Vec::with_capacity(count);
        for _ in 0..count {
            let c = rng.gen_range(0..classes);
            for j in 0..d {
                xs.push(centers[c][j] + standard_normal(&mut rng));
            }
            ys.push(c);
        }
        (xs, ys)
    };
    let (train_x, train_y) = draw(n);
    let (val_x, val_y) = draw(n / 4);
    let (test_x, test_y) = draw(n / 2);
    Ok(SyntheticDataset {
        features_dim: d,
        classes,
        noise_fraction: 0.0,
        train_x,
        val_x,
        test_x,
        train_y_clean: train_y.clone(),
        train_y,
        val_y,
        test_y,
    })
}

/// Substitute exactly `floor(fraction * n_train)` training labels with
/// uniformly random different classes. Validation and test labels are never
/// touched. Flip positions and replacement classes are functions of the seed.
pub fn inject_label_noise(
    dataset: &SyntheticDataset,
    fraction: f64,
    seed: u64,
) -> Result<SyntheticDataset> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(TsamError::InvalidParameter(format!(
            "noise fraction must lie in [0, 1), got {fraction}"
        )));
    }
    let mut out = dataset.clone();
    out.train_y = out.train_y_clean.clone();
    let n = out.n_train();
    let k = (fraction * n as f64).floor() as usize;
    let mut rng = root_rng(seed);
    // partial Fisher-Yates: first k entries of a virtual shuffle
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        idx.swap(i, j);
    }
    for &i in idx.iter().take(k) {
        let truth = out.train_y_clean[i];
        let mut alt = rng.gen_range(0..dataset.classes - 1);
        if alt >= truth {
            alt += 1;
        }
        out.train_y[i] = alt;
    }
    out.noise_fraction = fraction;
    Ok(out)
}
