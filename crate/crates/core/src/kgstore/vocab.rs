use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Entity and relation names with dense ids in first-appearance order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Vocab {
    entity_names: Vec<String>,
    relation_names: Vec<String>,
    entity_ids: HashMap<String, usize>,
    relation_ids: HashMap<String, usize>,
}

fn intern(names: &mut Vec<String>, ids: &mut HashMap<String, usize>, name: &str) -> usize {
    if let Some(&id) = ids.get(name) {
        return id;
    }
    let id = names.len();
    names.push(name.to_owned());
    ids.insert(name.to_owned(), id);
    id
}

impl Vocab {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names(entities: Vec<String>, relations: Vec<String>) -> Result<Self> {
        let mut v = Self::new();
        for name in &entities {
            v.intern_entity(name);
        }
        for name in &relations {
            v.intern_relation(name);
        }
        if v.num_entities() != entities.len() || v.num_relations() != relations.len() {
            return Err(Error::Parse {
                line: 0,
                message: "duplicate names in vocabulary".into(),
            });
        }
        Ok(v)
    }

    pub fn intern_entity(&mut self, name: &str) -> usize {
        intern(&mut self.entity_names, &mut self.entity_ids, name)
    }

    pub fn intern_relation(&mut self, name: &str) -> usize {
        intern(&mut self.relation_names, &mut self.relation_ids, name)
    }

    pub fn entity_id(&self, name: &str) -> Option<usize> {
        self.entity_ids.get(name).copied()
    }

    pub fn relation_id(&self, name: &str) -> Option<usize> {
        self.relation_ids.get(name).copied()
    }

    pub fn entity_name(&self, id: usize) -> Option<&str> {
        self.entity_names.get(id).map(String::as_str)
    }

    pub fn relation_name(&self, id: usize) -> Option<&str> {
        self.relation_names.get(id).map(String::as_str)
    }

    pub fn entity_names(&self) -> &[String] {
        &self.entity_names
    }

    pub fn relation_names(&self) -> &[String] {
        &self.relation_names
    }

    pub fn num_entities(&self) -> usize {
        self.entity_names.len()
    }

    pub fn num_relations(&self) -> usize {
        self.relation_names.len()
    }

    /// Writes `entities.tsv` and `relations.tsv` (`id<TAB>name` per line).
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        write_names(&dir.join("entities.tsv"), &self.entity_names)?;
        write_names(&dir.join("relations.tsv"), &self.relation_names)
    }

    pub fn read_files(dir: &Path) -> Result<Self> {
        let entities = read_names(&dir.join("entities.tsv"))?;
        let relations = read_names(&dir.join("relations.tsv"))?;
        Self::from_names(entities, relations)
    }
}

fn write_names(path: &Path, names: &[String]) -> Result<()> {
    let mut out = Vec::new();
    for (id, name) in names.iter().enumerate() {
        writeln!(out, "{id}\t{name}").expect("write to Vec");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn read_names(path: &Path) -> Result<Vec<String>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut names = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let (id, name) = line.split_once('\t').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected id<TAB>name in {}", path.display()),
        })?;
        if id.parse::<usize>().ok() != Some(names.len()) {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("ids in {} must be dense and in order", path.display()),
            });
        }
        names.push(name.to_owned());
    }
    Ok(names)
}
