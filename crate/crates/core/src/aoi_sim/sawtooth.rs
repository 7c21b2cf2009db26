/// An update generated at `generated` reaching the monitor at `time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Delivery {
    pub time: u64,
    pub generated: u64,
}

/// Integrates `Delta(t)` segment by segment between delivery instants.
///
/// Starts from `Delta(0) = initial age`. Between events the age rises with slope 1; a
/// delivery lowers it to `time - generated` unless it carries older
/// information than the monitor already has. Each segment contributes the
/// trapezoid `dt * age + dt^2 / 2`, accumulated doubled so it stays integral.
#[derive(Debug, Clone, Default)]
pub struct SawtoothIntegrator {
    last_time: u64,
    age: u64,
    twice_area: u128,
}

impl SawtoothIntegrator {
    /// Starts at `Delta(0) = 0`.
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts at `Delta(0) = age`.
    pub fn with_initial_age(age: u64) -> Self {
        Self {
            age,
            ..Self::default()
        }
    }

    fn advance_to(&mut self, time: u64) {
        debug_assert!(time >= self.last_time);
        let dt = u128::from(time - self.last_time);
        self.twice_area += 2 * dt * u128::from(self.age) + dt * dt;
        self.age += time - self.last_time;
        self.last_time = time;
    }

    pub fn deliver(&mut self, d: Delivery) {
        self.advance_to(d.time);
        self.age = self.age.min(d.time - d.generated);
    }

    /// Twice the area under `Delta(t)` on `[0, end]`.
    pub fn finish(mut self, end: u64) -> u128 {
        self.advance_to(end);
        self.twice_area
    }

    /// Current age.
    pub fn age(&self) -> u64 {
        self.age
    }
}
