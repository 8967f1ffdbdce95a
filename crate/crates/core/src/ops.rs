/// Basic-step counter used for complexity evidence.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpCount(pub u64);

impl OpCount {
    #[inline]
    pub fn tick(&mut self) {
        self.0 += 1;
    }

    #[inline]
    pub fn add(&mut self, n: u64) {
        self.0 += n;
    }

    pub fn get(self) -> u64 {
        self.0
    }
}
