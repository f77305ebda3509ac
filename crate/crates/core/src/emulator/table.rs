use alloc::vec::Vec;

/// Dense per-entity storage that hands out `default` for unseen ids.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct RatingTable<R> {
    values: Vec<R>,
    default: R,
}

impl<R: Copy> RatingTable<R> {
    pub fn new(default: R) -> Self {
        Self { values: Vec::new(), default }
    }

    pub fn get(&self, id: usize) -> R {
        self.values.get(id).copied().unwrap_or(self.default)
    }

    pub fn get_mut(&mut self, id: usize) -> &mut R {
        if id >= self.values.len() {
            self.values.resize(id + 1, self.default);
        }
        &mut self.values[id]
    }

    pub fn set(&mut self, id: usize, value: R) {
        *self.get_mut(id) = value;
    }
}
