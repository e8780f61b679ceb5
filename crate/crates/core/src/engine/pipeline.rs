use std::collections::VecDeque;

use super::Qty;

/// Shipments in transit, bucketed by arrival step.
///
/// Slot `k` holds the quantities (one entry per warehouse/SKU cell) that
/// arrive at step `base_step + k`. Quantities arriving together for the same
/// cell are merged, so a cell's shipment list is the set of non-zero slots.
#[derive(Debug, Clone)]
pub struct Pipeline {
    cells: usize,
    base_step: usize,
    slots: VecDeque<Vec<Qty>>,
    in_transit: Vec<Qty>,
    spare: Vec<Vec<Qty>>,
}

impl Pipeline {
    pub fn new(cells: usize, base_step: usize) -> Self {
        Self {
            cells,
            base_step,
            slots: VecDeque::new(),
            in_transit: vec![0; cells],
            spare: Vec::new(),
        }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// First step whose arrivals are still held.
    pub fn base_step(&self) -> usize {
        self.base_step
    }

    /// Total in-transit quantity per cell (`T`).
    pub fn in_transit(&self) -> &[Qty] {
        &self.in_transit
    }

    pub fn is_empty(&self) -> bool {
        self.in_transit.iter().all(|&q| q == 0)
    }

    /// Adds `qty` units for `cell` arriving at `arrival_step`.
    ///
    /// Panics if `arrival_step` precedes the first held step.
    pub fn schedule(&mut self, cell: usize, arrival_step: usize, qty: Qty) {
        if qty == 0 {
            return;
        }
        assert!(
            arrival_step >= self.base_step,
            "shipment arriving at {arrival_step} scheduled after step {} was released",
            self.base_step
        );
        let offset = arrival_step - self.base_step;
        while self.slots.len() <= offset {
            let slot = match self.spare.pop() {
                Some(mut v) => {
                    v.iter_mut().for_each(|q| *q = 0);
                    v
                }
                None => vec![0; self.cells],
            };
            self.slots.push_back(slot);
        }
        self.slots[offset][cell] += qty;
        self.in_transit[cell] += qty;
    }

    /// Quantity of `cell` due at `step`.
    pub fn due(&self, cell: usize, step: usize) -> Qty {
        step.checked_sub(self.base_step)
            .and_then(|k| self.slots.get(k))
            .map_or(0, |slot| slot[cell])
    }

    /// Removes and returns the quantity of one cell due at `step`.
    pub fn take_due_cell(&mut self, cell: usize, step: usize) -> Qty {
        let Some(k) = step.checked_sub(self.base_step) else {
            return 0;
        };
        match self.slots.get_mut(k) {
            Some(slot) => {
                let q = std::mem::take(&mut slot[cell]);
                self.in_transit[cell] -= q;
                q
            }
            None => 0,
        }
    }

    /// Releases every arrival due at `step` as a dense per-cell vector and
    /// moves the base step past it. `step` must equal the current base step.
    pub fn take_due(&mut self, step: usize) -> Vec<Qty> {
        debug_assert_eq!(step, self.base_step);
        self.base_step = step + 1;
        match self.slots.pop_front() {
            Some(slot) => {
                for (t, q) in self.in_transit.iter_mut().zip(&slot) {
                    *t -= q;
                }
                slot
            }
            None => vec![0; self.cells],
        }
    }

    /// Drops the (already emptied) slot for `step` and advances the base step.
    pub fn advance(&mut self, step: usize) {
        debug_assert_eq!(step, self.base_step);
        if let Some(slot) = self.slots.pop_front() {
            debug_assert!(slot.iter().all(|&q| q == 0), "advancing past undelivered shipments");
            self.spare.push(slot);
        }
        self.base_step = step + 1;
    }

    /// Hands a released arrival buffer back for reuse.
    pub fn recycle(&mut self, buf: Vec<Qty>) {
        if buf.len() == self.cells && self.spare.len() < 4 {
            self.spare.push(buf);
        }
    }

    /// Outstanding shipments of one cell as `(arrival_step, quantity)` pairs
    /// in arrival order.
    pub fn shipments(&self, cell: usize) -> impl Iterator<Item = (usize, Qty)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(move |(_, slot)| slot[cell] > 0)
            .map(move |(k, slot)| (self.base_step + k, slot[cell]))
    }

    /// Number of bytes held by the slot matrices.
    pub fn allocated_bytes(&self) -> usize {
        (self.slots.len() + self.spare.len() + 1) * self.cells * std::mem::size_of::<Qty>()
    }
}

impl PartialEq for Pipeline {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
            && self.in_transit == other.in_transit
            && (0..self.cells).all(|c| self.shipments(c).eq(other.shipments(c)))
    }
}

impl Eq for Pipeline {}
