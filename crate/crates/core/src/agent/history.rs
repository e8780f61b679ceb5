use crate::engine::Qty;

/// Trailing per-cell demand, newest last. Echelon 0 records consumer demand;
/// higher echelons record the orders they received from downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandHistory {
    cells: usize,
    capacity: usize,
    /// `capacity` rows of `cells`, used as a ring.
    rows: Vec<Qty>,
    head: usize,
    len: usize,
}

impl DemandHistory {
    pub fn new(cells: usize, capacity: usize) -> Self {
        let capacity = capacity.max(1);
        Self {
            cells,
            capacity,
            rows: vec![0; cells * capacity],
            head: 0,
            len: 0,
        }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Steps currently held, at most the capacity.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, demand: &[Qty]) {
        assert_eq!(demand.len(), self.cells, "demand row has the wrong width");
        let at = (self.head + self.len) % self.capacity;
        self.rows[at * self.cells..(at + 1) * self.cells].copy_from_slice(demand);
        if self.len == self.capacity {
            self.head = (self.head + 1) % self.capacity;
        } else {
            self.len += 1;
        }
    }

    /// The last `k` values of one cell, oldest first. Fewer when the history
    /// is shorter.
    pub fn last(&self, cell: usize, k: usize) -> impl Iterator<Item = Qty> + '_ {
        let k = k.min(self.len);
        let skip = self.len - k;
        (skip..self.len).map(move |n| self.rows[((self.head + n) % self.capacity) * self.cells + cell])
    }

    /// `(sum, count)` over the last `k` values of one cell.
    pub fn sum_last(&self, cell: usize, k: usize) -> (u128, usize) {
        let mut count = 0;
        let sum = self.last(cell, k).inspect(|_| count += 1).map(u128::from).sum();
        (sum, count)
    }

    /// Population mean and standard deviation over the last `k` values;
    /// zeros when nothing has been recorded.
    pub fn mean_std(&self, cell: usize, k: usize) -> (f64, f64) {
        let (sum, n) = self.sum_last(cell, k);
        if n == 0 {
            return (0.0, 0.0);
        }
        let mean = sum as f64 / n as f64;
        let var = self.last(cell, k).map(|q| (q as f64 - mean).powi(2)).sum::<f64>() / n as f64;
        (mean, var.sqrt())
    }
}
