//! Placeholder while the core library builds.
