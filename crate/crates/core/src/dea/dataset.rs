use crate::error::{DeaError, Result};

/// `n` DMUs with `m1` inputs and `m2` outputs, plus their translated points
/// `a^i = (-X_i, Y_i)`. All matrices are row-major, one DMU per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    m1: usize,
    m2: usize,
    inputs: Vec<f64>,
    outputs: Vec<f64>,
    translated: Vec<f64>,
}

/// `(-x, y)`; every component must be positive and finite.
pub fn translate_point(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    if let Some(v) = x.iter().chain(y).find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(DeaError::Domain(format!(
            "measurement {v} is not a positive finite number"
        )));
    }
    Ok(x.iter().map(|v| -v).chain(y.iter().copied()).collect())
}

impl Dataset {
    /// Builds a dataset from per-DMU input and output vectors.
    pub fn new(name: impl Into<String>, inputs: &[Vec<f64>], outputs: &[Vec<f64>]) -> Result<Self> {
        let n = inputs.len();
        if n == 0 {
            return Err(DeaError::Domain("a dataset needs at least one DMU".into()));
        }
        if outputs.len() != n {
            return Err(DeaError::Domain(format!(
                "{n} input rows but {} output rows",
                outputs.len()
            )));
        }
        let m1 = inputs[0].len();
        let m2 = outputs[0].len();
        if m1 == 0 || m2 == 0 {
            return Err(DeaError::Domain(
                "at least one input and one output are required".into(),
            ));
        }
        let mut ds = Self {
            name: name.into(),
            m1,
            m2,
            inputs: Vec::with_capacity(n * m1),
            outputs: Vec::with_capacity(n * m2),
            translated: Vec::with_capacity(n * (m1 + m2)),
        };
        for (i, (x, y)) in inputs.iter().zip(outputs).enumerate() {
            if x.len() != m1 || y.len() != m2 {
                return Err(DeaError::Domain(format!(
                    "DMU {i} has the wrong number of measurements"
                )));
            }
            let a = translate_point(x, y).map_err(|e| DeaError::Domain(format!("DMU {i}: {e}")))?;
            ds.inputs.extend_from_slice(x);
            ds.outputs.extend_from_slice(y);
            ds.translated.extend(a);
        }
        Ok(ds)
    }

    /// Builds a dataset from rows laid out as `x1..x{m1}, y1..y{m2}`.
    pub fn from_rows(name: impl Into<String>, m1: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let (inputs, outputs): (Vec<_>, Vec<_>) = rows
            .iter()
            .map(|r| {
                let k = m1.min(r.len());
                (r[..k].to_vec(), r[k..].to_vec())
            })
            .unzip();
        Self::new(name, &inputs, &outputs)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn n(&self) -> usize {
        self.inputs.len() / self.m1
    }

    pub fn m1(&self) -> usize {
        self.m1
    }

    pub fn m2(&self) -> usize {
        self.m2
    }

    /// The dimension `m = m1 + m2`.
    pub fn m(&self) -> usize {
        self.m1 + self.m2
    }

    pub fn input(&self, i: usize) -> &[f64] {
        &self.inputs[i * self.m1..(i + 1) * self.m1]
    }

    pub fn output(&self, i: usize) -> &[f64] {
        &self.outputs[i * self.m2..(i + 1) * self.m2]
    }

    /// Translated point `a^i`.
    pub fn point(&self, i: usize) -> &[f64] {
        let m = self.m();
        &self.translated[i * m..(i + 1) * m]
    }

    pub fn points<'a>(&'a self, indices: &'a [usize]) -> impl Iterator<Item = &'a [f64]> + 'a {
        indices.iter().map(move |&i| self.point(i))
    }

    /// Row `i` as `x1..x{m1}, y1..y{m2}`.
    pub fn row(&self, i: usize) -> Vec<f64> {
        self.input(i)
            .iter()
            .chain(self.output(i))
            .copied()
            .collect()
    }

    /// Multiplies every input by `input_factor` and every output by `output_factor`.
    pub fn scaled(&self, input_factor: f64, output_factor: f64) -> Result<Self> {
        let n = self.n();
        let inputs: Vec<Vec<f64>> = (0..n)
            .map(|i| self.input(i).iter().map(|v| v * input_factor).collect())
            .collect();
        let outputs: Vec<Vec<f64>> = (0..n)
            .map(|i| self.output(i).iter().map(|v| v * output_factor).collect())
            .collect();
        Self::new(self.name.clone(), &inputs, &outputs)
    }

    /// DMUs reordered so that new DMU `k` is old DMU `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let inputs: Vec<Vec<f64>> = perm.iter().map(|&i| self.input(i).to_vec()).collect();
        let outputs: Vec<Vec<f64>> = perm.iter().map(|&i| self.output(i).to_vec()).collect();
        Self::new(self.name.clone(), &inputs, &outputs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_examples() {
        assert_eq!(translate_point(&[1.0], &[1.0]).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(translate_point(&[2.0], &[3.0]).unwrap(), vec![-2.0, 3.0]);
        assert_eq!(
            translate_point(&[3.0, 4.0], &[2.0]).unwrap(),
            vec![-3.0, -4.0, 2.0]
        );
    }

    #[test]
    fn translation_rejects_non_positive() {
        assert!(matches!(
            translate_point(&[0.0], &[1.0]),
            Err(DeaError::Domain(_))
        ));
        assert!(matches!(
            translate_point(&[1.0], &[-2.0]),
            Err(DeaError::Domain(_))
        ));
        assert!(matches!(
            translate_point(&[f64::INFINITY], &[1.0]),
            Err(DeaError::Domain(_))
        ));
        assert!(matches!(
            translate_point(&[f64::NAN], &[1.0]),
            Err(DeaError::Domain(_))
        ));
    }

    #[test]
    fn dataset_layout() {
        let ds = Dataset::from_rows("t", 2, &[vec![1.0, 2.0, 5.0], vec![3.0, 4.0, 6.0]]).unwrap();
        assert_eq!((ds.n(), ds.m1(), ds.m2(), ds.m()), (2, 2, 1, 3));
        assert_eq!(ds.point(1), &[-3.0, -4.0, 6.0]);
        assert_eq!(ds.input(0), &[1.0, 2.0]);
        assert_eq!(ds.output(1), &[6.0]);
        assert_eq!(ds.row(1), vec![3.0, 4.0, 6.0]);
    }

    #[test]
    fn dataset_validation() {
        assert!(Dataset::new("e", &[], &[]).is_err());
        assert!(Dataset::from_rows("r", 1, &[vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(Dataset::from_rows("z", 1, &[vec![1.0, 0.0]]).is_err());
        assert!(Dataset::from_rows("no outputs", 2, &[vec![1.0, 2.0]]).is_err());
    }
}
