//! Experiment configuration, dispatch and CSV output.

pub mod config;
pub mod run;
pub mod table;

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::Error;

pub use config::{parse_config, parse_config_for, Experiment, ExperimentConfig, ParamDoc, Value};
pub use run::run_experiment;
pub use table::{write_csv, Cell, CsvTable};

/// Failures of the harness, each with its process exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("config error{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Config { line: Option<usize>, message: String },
    #[error("{experiment}: precondition violated: {message}")]
    Precondition { experiment: &'static str, message: String },
    #[error("{experiment}: {source}")]
    Run { experiment: &'static str, source: Error },
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    pub(crate) fn config(line: Option<usize>, message: impl Into<String>) -> Self {
        Self::Config { line, message: message.into() }
    }

    /// 1 for configuration and i/o errors, 2 for numerical preconditions,
    /// 3 for a blow-up signal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config { .. } | Self::Io(_) => 1,
            Self::Precondition { .. } => 2,
            Self::Run { source: Error::BlowUp { .. }, .. } => 3,
            Self::Run { .. } => 2,
        }
    }
}

/// Maps `f` over `items` on scoped worker threads. Results keep the order
/// of `items`.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut indexed: Vec<(usize, R)> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= items.len() {
                            break done;
                        }
                        done.push((i, f(&items[i])));
                    }
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker thread panicked")).collect()
    });
    indexed.sort_by_key(|(i, _)| *i);
    indexed.into_iter().map(|(_, r)| r).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_preserves_order() {
        let items: Vec<u64> = (0..100).collect();
        assert_eq!(par_map(&items, |x| x * x), items.iter().map(|x| x * x).collect::<Vec<_>>());
        assert!(par_map(&[] as &[u64], |x| *x).is_empty());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(HarnessError::config(Some(2), "x").exit_code(), 1);
        assert_eq!(HarnessError::Precondition { experiment: "simulate", message: "x".into() }.exit_code(), 2);
        let blow = HarnessError::Run { experiment: "simulate", source: Error::BlowUp { last_finite_time: 0.5 } };
        assert_eq!(blow.exit_code(), 3);
        let pre = HarnessError::Run { experiment: "weyl", source: Error::Domain("x".into()) };
        assert_eq!(pre.exit_code(), 2);
    }
}
