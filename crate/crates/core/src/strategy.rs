//! Named registries of interchangeable algorithm variants.
//!
//! Each registry maps a name to a factory taking a flat parameter map, so
//! scenario files and CLI flags can select a variant by string.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type StrategyParams = BTreeMap<String, f64>;

pub type Factory<T> = fn(&StrategyParams) -> Result<Box<T>>;

pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Factory<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self {
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, factory: Factory<T>) -> &mut Self {
        self.entries.insert(name, factory);
        self
    }

    pub fn kind(&self) -> &'static str {
        self.kind
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    pub fn create(&self, name: &str, params: &StrategyParams) -> Result<Box<T>> {
        match self.entries.get(name) {
            Some(factory) => factory(params),
            None => Err(Error::UnknownStrategy {
                kind: self.kind,
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            }),
        }
    }
}

pub(crate) fn required(params: &StrategyParams, key: &'static str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or(Error::MissingStrategyParam(key))
}
