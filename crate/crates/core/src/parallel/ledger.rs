use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write;

use crate::tensor::C64;

/// Bytes per complex double.
pub const DEFAULT_ELEMENT_BYTES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub step: String,
    pub sender: usize,
    pub receiver: usize,
    pub complex_count: usize,
}

/// Every value sent between workers, in send order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExchangeLedger {
    entries: Vec<Transfer>,
    received: BTreeMap<(String, usize, usize), usize>,
}

impl ExchangeLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[Transfer] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Values sent per `(sender, receiver)` pair.
    pub fn totals(&self) -> BTreeMap<(usize, usize), usize> {
        let mut t = BTreeMap::new();
        for e in &self.entries {
            *t.entry((e.sender, e.receiver)).or_insert(0) += e.complex_count;
        }
        t
    }

    pub fn sent_between(&self, sender: usize, receiver: usize) -> usize {
        self.totals().get(&(sender, receiver)).copied().unwrap_or(0)
    }

    pub fn step_total(&self, step: &str) -> usize {
        self.entries
            .iter()
            .filter(|e| e.step == step)
            .map(|e| e.complex_count)
            .sum()
    }

    pub fn total_sent(&self) -> usize {
        self.entries.iter().map(|e| e.complex_count).sum()
    }

    pub fn total_received(&self) -> usize {
        self.received.values().sum()
    }

    /// Sent equals received for every `(step, sender, receiver)`.
    pub fn is_conserved(&self) -> bool {
        let mut sent: BTreeMap<(String, usize, usize), usize> = BTreeMap::new();
        for e in &self.entries {
            *sent.entry((e.step.clone(), e.sender, e.receiver)).or_insert(0) += e.complex_count;
        }
        sent == self.received
    }

    pub fn total_bytes(&self, element_bytes: usize) -> usize {
        self.total_sent() * element_bytes
    }

    /// `step,sender,receiver,complex_count` with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,sender,receiver,complex_count\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{}", e.step, e.sender, e.receiver, e.complex_count);
        }
        out
    }
}

/// Point-to-point message channels between workers, with accounting.
#[derive(Debug, Default)]
pub struct Network {
    ledger: ExchangeLedger,
    inboxes: HashMap<(String, usize, usize), VecDeque<Vec<C64>>>,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn send(&mut self, step: &str, sender: usize, receiver: usize, payload: Vec<C64>) {
        self.ledger.entries.push(Transfer {
            step: step.to_string(),
            sender,
            receiver,
            complex_count: payload.len(),
        });
        self.inboxes
            .entry((step.to_string(), sender, receiver))
            .or_default()
            .push_back(payload);
    }

    /// Next message from `sender` to `receiver` at `step`.
    ///
    /// # Panics
    /// If no such message was sent; schedules must send before receiving.
    pub fn receive(&mut self, step: &str, sender: usize, receiver: usize) -> Vec<C64> {
        let key = (step.to_string(), sender, receiver);
        let payload = self
            .inboxes
            .get_mut(&key)
            .and_then(|q| q.pop_front())
            .unwrap_or_else(|| panic!("no message from {sender} to {receiver} at step {step:?}"));
        *self.ledger.received.entry(key).or_insert(0) += payload.len();
        payload
    }

    pub fn pending(&self) -> usize {
        self.inboxes.values().map(|q| q.len()).sum()
    }

    pub fn into_ledger(self) -> ExchangeLedger {
        self.ledger
    }
}
