use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

/// Shared pruning bound: the distance of the best known `k`-th pair.
///
/// Stored as the bit pattern of a non-negative `f64`. Reads are wait-free
/// and may be stale, which only loosens pruning. Writes only ever lower it.
#[derive(Debug)]
pub struct GlobalThreshold {
    bits: AtomicU64,
    updates: AtomicU64,
    history: Option<Mutex<Vec<f64>>>,
}

impl GlobalThreshold {
    pub fn new(initial: f64) -> Self {
        GlobalThreshold {
            bits: AtomicU64::new(initial.to_bits()),
            updates: AtomicU64::new(0),
            history: None,
        }
    }

    /// Like [`new`](Self::new) but keeps every successful update, in the
    /// order they took effect.
    pub fn with_history(initial: f64) -> Self {
        GlobalThreshold {
            history: Some(Mutex::new(vec![initial])),
            ..Self::new(initial)
        }
    }

    #[inline]
    pub fn read(&self) -> f64 {
        f64::from_bits(self.bits.load(Ordering::Acquire))
    }

    /// Lowers the bound to `candidate` if that is smaller and returns the
    /// value after the update.
    pub fn tighten(&self, candidate: f64) -> f64 {
        self.lower(candidate);
        self.read()
    }

    /// Returns whether this call lowered the bound.
    pub(crate) fn lower(&self, candidate: f64) -> bool {
        debug_assert!(candidate >= 0.0);
        // writers are serialized only while recording history
        let guard = self.history.as_ref().map(|h| h.lock().unwrap());
        let mut current = self.bits.load(Ordering::Acquire);
        loop {
            if candidate >= f64::from_bits(current) {
                return false;
            }
            match self
                .bits
                .compare_exchange_weak(current, candidate.to_bits(), Ordering::AcqRel, Ordering::Acquire)
            {
                Ok(_) => break,
                Err(actual) => current = actual,
            }
        }
        self.updates.fetch_add(1, Ordering::Relaxed);
        if let Some(mut log) = guard {
            log.push(candidate);
        }
        true
    }

    /// Number of successful updates so far.
    pub fn updates(&self) -> u64 {
        self.updates.load(Ordering::Relaxed)
    }

    pub fn history(&self) -> Option<Vec<f64>> {
        self.history.as_ref().map(|h| h.lock().unwrap().clone())
    }
}
