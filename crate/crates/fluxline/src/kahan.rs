//! Compensated (Kahan) summation.

use crate::scalar::Scalar;

/// Kahan accumulator. Tracks a running correction term so that long sums of
/// same-sign terms keep near machine precision independent of length.
#[derive(Debug, Clone, Copy)]
pub struct KahanSum<T> {
    sum: T,
    correction: T,
}

impl<T: Scalar> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            correction: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, x: T) {
        let y = x - self.correction;
        let t = self.sum + y;
        self.correction = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum
    }
}

/// Sum an iterator with compensation.
pub fn kahan_sum<T: Scalar>(it: impl Iterator<Item = T>) -> T {
    let mut acc = KahanSum::new();
    for x in it {
        acc.add(x);
    }
    acc.value()
}
