//! Placeholder; C ABI filled in once the core library lands.
