use super::report::InputsDigest;
use crate::functions::GridFunction;
use crate::sets::{CoefficientSet, DiscreteSet};

pub(crate) trait DigestExt {
    fn set(&mut self, label: &str, set: &DiscreteSet) -> &mut Self;
    fn function(&mut self, label: &str, f: &GridFunction) -> &mut Self;
    fn coefficients(&mut self, label: &str, m: &CoefficientSet) -> &mut Self;
}

impl DigestExt for InputsDigest {
    fn set(&mut self, label: &str, set: &DiscreteSet) -> &mut Self {
        self.int(label, set.dim() as u64).floats(label, set.coords())
    }

    fn function(&mut self, label: &str, f: &GridFunction) -> &mut Self {
        let g = f.grid();
        self.floats(label, g.bounds().lo()).floats(label, g.bounds().hi());
        for &k in g.shape() {
            self.int(label, k as u64);
        }
        self.floats(label, f.values())
    }

    fn coefficients(&mut self, label: &str, m: &CoefficientSet) -> &mut Self {
        let flat: Vec<f64> = m.pairs().iter().flat_map(|&(a, b)| [a, b]).collect();
        self.floats(label, &flat)
    }
}
