//! Process-wide validation of every canonical form the arithmetic produces.
//!
//! Active in builds with debug assertions (which includes `cargo test`) or
//! with the `audit` feature; otherwise [`is_active`] is false and recording
//! is free.

use std::sync::atomic::{AtomicU64, Ordering};

use super::CanonicalForm;

static CHECKED: AtomicU64 = AtomicU64::new(0);
static VIOLATIONS: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AuditCounts {
    pub checked: u64,
    pub violations: u64,
}

pub const fn is_active() -> bool {
    cfg!(any(debug_assertions, feature = "audit"))
}

pub fn counts() -> AuditCounts {
    AuditCounts { checked: CHECKED.load(Ordering::Relaxed), violations: VIOLATIONS.load(Ordering::Relaxed) }
}

#[inline]
pub(crate) fn record(x: &CanonicalForm) {
    if is_active() {
        CHECKED.fetch_add(1, Ordering::Relaxed);
        if x.validate().is_err() {
            VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        }
    }
}
