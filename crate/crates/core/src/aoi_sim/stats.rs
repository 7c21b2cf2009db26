/// Exact running moments of integer-valued observations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SampleStats {
    pub count: u64,
    pub sum: u128,
    pub sum_sq: u128,
}

impl SampleStats {
    pub fn push(&mut self, x: u64) {
        self.count += 1;
        self.sum += u128::from(x);
        self.sum_sq += u128::from(x) * u128::from(x);
    }

    pub fn merge(&mut self, other: &Self) {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    pub fn mean(&self) -> f64 {
        self.sum as f64 / self.count as f64
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            return f64::NAN;
        }
        let n = u128::from(self.count);
        let spread = n * self.sum_sq - self.sum * self.sum;
        spread as f64 / (n as f64 * (n - 1) as f64)
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        libm::sqrt(self.variance() / self.count as f64)
    }
}
