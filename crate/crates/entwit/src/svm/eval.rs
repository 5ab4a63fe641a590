//! Classifier evaluation: per-class rates, confusion counts and decision
//! histograms.

use crate::error::{Error, Result};
use crate::par;
use crate::svm::{Label, LabeledSample, Model};

/// Counts of decision values over [-1, 1], split by true class. Values
/// outside the range land in the edge bins so every sample is counted.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub separable: Vec<u64>,
    pub entangled: Vec<u64>,
}

impl Histogram {
    pub const LO: f64 = -1.0;
    pub const HI: f64 = 1.0;

    fn new(bins: usize) -> Self {
        Self { separable: vec![0; bins], entangled: vec![0; bins] }
    }

    pub fn bins(&self) -> usize {
        self.separable.len()
    }

    pub fn bin_width(&self) -> f64 {
        (Self::HI - Self::LO) / self.bins() as f64
    }

    /// [left, right) edges of bin `i` (the last bin is closed at 1).
    pub fn edges(&self, i: usize) -> (f64, f64) {
        let w = self.bin_width();
        (Self::LO + i as f64 * w, Self::LO + (i + 1) as f64 * w)
    }

    fn record(&mut self, label: Label, value: f64) {
        let bins = self.bins();
        let raw = ((value - Self::LO) / self.bin_width()).floor() as i64;
        let bin = raw.clamp(0, bins as i64 - 1) as usize;
        match label {
            Label::Separable => self.separable[bin] += 1,
            Label::Entangled => self.entangled[bin] += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.separable.iter().sum::<u64>() + self.entangled.iter().sum::<u64>()
    }
}

/// Confusion counts; rows are true classes, columns predictions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Confusion {
    /// Entangled predicted entangled.
    pub detected: u64,
    /// Entangled predicted separable.
    pub missed: u64,
    /// Separable predicted separable.
    pub passed: u64,
    /// Separable predicted entangled.
    pub false_alarm: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub n: usize,
    pub confusion: Confusion,
    /// Fraction of entangled samples detected; NaN when there are none.
    pub entangled_recall: f64,
    /// Fraction of separable samples passed; NaN when there are none.
    pub separable_specificity: f64,
    pub accuracy: f64,
    pub histogram: Histogram,
}

/// Scores a model over labeled samples with a `bins`-bin decision histogram.
pub fn evaluate(model: &Model, samples: &[LabeledSample], bins: usize) -> Result<Report> {
    if samples.is_empty() {
        return Err(Error::EmptyBatch);
    }
    if bins == 0 {
        return Err(Error::InvalidConfig("histogram needs at least one bin".into()));
    }
    let values = par::map_slice(samples, |s| model.decision_value(&s.features));

    let mut confusion = Confusion::default();
    let mut histogram = Histogram::new(bins);
    for (sample, &value) in samples.iter().zip(values.iter()) {
        let predicted = Label::from_sign(value);
        match (sample.label, predicted) {
            (Label::Entangled, Label::Entangled) => confusion.detected += 1,
            (Label::Entangled, Label::Separable) => confusion.missed += 1,
            (Label::Separable, Label::Separable) => confusion.passed += 1,
            (Label::Separable, Label::Entangled) => confusion.false_alarm += 1,
        }
        histogram.record(sample.label, value);
    }

    let n_ent = confusion.detected + confusion.missed;
    let n_sep = confusion.passed + confusion.false_alarm;
    Ok(Report {
        n: samples.len(),
        confusion,
        entangled_recall: confusion.detected as f64 / n_ent as f64,
        separable_specificity: confusion.passed as f64 / n_sep as f64,
        accuracy: (confusion.detected + confusion.passed) as f64 / samples.len() as f64,
        histogram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliVector;
    use crate::sampling::FamilyTag;
    use crate::svm::{normalize_witness, Model};
    use approx::assert_abs_diff_eq;

    fn planar(value: f64, family: FamilyTag) -> LabeledSample {
        let mut coeffs = [0.0; 256];
        coeffs[5] = value;
        LabeledSample::new(PauliVector::new(coeffs).unwrap(), family)
    }

    /// Witness with a single weight on coordinate 5, spectrally normalized.
    fn axis_model() -> Model {
        let mut w = [0.0; 256];
        w[5] = 1.0;
        Model::Linear(normalize_witness(&PauliVector::new(w).unwrap()).unwrap())
    }

    #[test]
    fn perfect_classifier_reports_ones() {
        let model = axis_model();
        let mut samples = Vec::new();
        for k in 0..50 {
            samples.push(planar(0.2 + 0.001 * k as f64, FamilyTag::Sep));
            samples.push(planar(-0.2 - 0.001 * k as f64, FamilyTag::E3));
        }
        let report = evaluate(&model, &samples, 75).unwrap();
        assert_abs_diff_eq!(report.entangled_recall, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.separable_specificity, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(report.accuracy, 1.0, epsilon = 1e-12);
        assert_eq!(report.confusion.missed, 0);
        assert_eq!(report.confusion.false_alarm, 0);
        assert_eq!(report.histogram.total(), samples.len() as u64);
    }

    #[test]
    fn histogram_shape_matches_the_contract() {
        let model = axis_model();
        let samples = vec![planar(0.3, FamilyTag::Sep)];
        let report = evaluate(&model, &samples, 75).unwrap();
        assert_eq!(report.histogram.bins(), 75);
        assert_abs_diff_eq!(report.histogram.bin_width(), 2.0 / 75.0, epsilon = 1e-15);
        let (left, right) = report.histogram.edges(0);
        assert_abs_diff_eq!(left, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(right, -1.0 + 2.0 / 75.0, epsilon = 1e-15);
    }

    #[test]
    fn all_positive_witness_has_zero_recall_on_entangled() {
        let model = axis_model();
        let samples: Vec<LabeledSample> =
            (0..20).map(|_| planar(0.4, FamilyTag::E3)).collect();
        let report = evaluate(&model, &samples, 75).unwrap();
        assert_abs_diff_eq!(report.entangled_recall, 0.0, epsilon = 1e-12);
        assert!(report.separable_specificity.is_nan());
    }

    #[test]
    fn out_of_range_values_land_in_edge_bins() {
        // the raw (unnormalized) axis weight gives value 2.5 here
        let mut w = [0.0; 256];
        w[5] = 1.0;
        let model = Model::Linear(crate::svm::Witness::from_normalized(
            PauliVector::new(w).unwrap(),
        ));
        let samples = vec![planar(2.5, FamilyTag::Sep), planar(-2.5, FamilyTag::E3)];
        let report = evaluate(&model, &samples, 75).unwrap();
        assert_eq!(report.histogram.separable[74], 1);
        assert_eq!(report.histogram.entangled[0], 1);
        assert_eq!(report.histogram.total(), 2);
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(evaluate(&axis_model(), &[], 75), Err(Error::EmptyBatch)));
    }
}
