//! Named reference quivers and their mutation classes.
//!
//! Exceptional seeds live in `seeds/*.quiver` with one fixed orientation
//! each. Dynkin seeds of types A and D, and oriented cycles, are built on
//! demand. Classes are enumerated lazily and optionally cached on disk as
//! JSON-lines dumps named `<seed>.v<version>.jsonl`.

use std::collections::HashMap;
use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::canon::{self, CanonMode};
use crate::error::{Error, Result};
use crate::format;
use crate::mutclass::{self, Caps, ClassStatus, EnumerateOptions, MutationClass};
use crate::quiver::Quiver;

/// Bumped whenever seeds or the dump layout change; older caches are
/// rebuilt.
pub const CATALOG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Contains a subquiver mutation-equivalent to E6.
    E,
    /// Contains a subquiver mutation-equivalent to X6.
    X,
}

struct SeedSource {
    name: &'static str,
    family: Family,
    text: &'static str,
}

const EXCEPTIONAL_SOURCES: [SeedSource; 11] = [
    SeedSource { name: "E6", family: Family::E, text: include_str!("../seeds/E6.quiver") },
    SeedSource { name: "E7", family: Family::E, text: include_str!("../seeds/E7.quiver") },
    SeedSource { name: "E8", family: Family::E, text: include_str!("../seeds/E8.quiver") },
    SeedSource { name: "E6^(1)", family: Family::E, text: include_str!("../seeds/E6_1.quiver") },
    SeedSource { name: "E7^(1)", family: Family::E, text: include_str!("../seeds/E7_1.quiver") },
    SeedSource { name: "E8^(1)", family: Family::E, text: include_str!("../seeds/E8_1.quiver") },
    SeedSource { name: "E6^(1,1)", family: Family::E, text: include_str!("../seeds/E6_11.quiver") },
    SeedSource { name: "E7^(1,1)", family: Family::E, text: include_str!("../seeds/E7_11.quiver") },
    SeedSource { name: "E8^(1,1)", family: Family::E, text: include_str!("../seeds/E8_11.quiver") },
    SeedSource { name: "X6", family: Family::X, text: include_str!("../seeds/X6.quiver") },
    SeedSource { name: "X7", family: Family::X, text: include_str!("../seeds/X7.quiver") },
];

/// Names of the exceptional seeds, E family first.
pub const EXCEPTIONAL: [&str; 11] = [
    "E6", "E7", "E8", "E6^(1)", "E7^(1)", "E8^(1)", "E6^(1,1)", "E7^(1,1)", "E8^(1,1)", "X6",
    "X7",
];

/// Exceptional seeds whose underlying graph is a tree.
pub const TREE_SEEDS: [&str; 6] = ["E6", "E7", "E8", "E6^(1)", "E7^(1)", "E8^(1)"];

/// Family of an exceptional seed name.
pub fn family(name: &str) -> Option<Family> {
    EXCEPTIONAL_SOURCES
        .iter()
        .find(|s| s.name == name)
        .map(|s| s.family)
}

/// Path `0 → 1 → … → n-1`.
pub fn a_n(n: usize) -> Result<Quiver> {
    if n == 0 {
        return Err(Error::NoVertices);
    }
    Quiver::from_arrows(n, (1..n).map(|i| (i - 1, i, 1)))
}

/// Path `0 → 1 → … → n-3` with two leaves `n-2`, `n-1` hanging off `n-3`.
pub fn d_n(n: usize) -> Result<Quiver> {
    if n < 4 {
        return Err(Error::UnknownReference(format!("D{n}")));
    }
    let fork = n - 3;
    let arrows = (1..=fork)
        .map(|i| (i - 1, i, 1))
        .chain([(fork, n - 2, 1), (fork, n - 1, 1)]);
    Quiver::from_arrows(n, arrows)
}

/// Oriented simply-laced cycle `0 → 1 → … → n-1 → 0`.
pub fn oriented_cycle(n: usize) -> Result<Quiver> {
    if n < 3 {
        return Err(Error::UnknownReference(format!("C{n}")));
    }
    Quiver::from_arrows(n, (0..n).map(|i| (i, (i + 1) % n, 1)))
}

fn parametric(name: &str) -> Option<Result<Quiver>> {
    let (prefix, rest) = name.split_at(1.min(name.len()));
    let n: usize = rest.parse().ok()?;
    match prefix {
        "A" => Some(a_n(n)),
        "D" => Some(d_n(n)),
        "C" => Some(oriented_cycle(n)),
        _ => None,
    }
}

/// The seed for a name: one of [`EXCEPTIONAL`], or `A<n>`, `D<n>`, `C<n>`
/// (oriented cycle).
pub fn seed(name: &str) -> Result<Quiver> {
    if let Some(src) = EXCEPTIONAL_SOURCES.iter().find(|s| s.name == name) {
        return format::parse_text(src.text);
    }
    parametric(name).unwrap_or_else(|| Err(Error::UnknownReference(name.to_owned())))
}

/// Text of an exceptional seed exactly as shipped.
pub fn seed_text(name: &str) -> Option<&'static str> {
    EXCEPTIONAL_SOURCES
        .iter()
        .find(|s| s.name == name)
        .map(|s| s.text)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedInfo {
    pub name: String,
    pub vertices: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<Family>,
}

type Slot = Arc<Mutex<Option<Arc<MutationClass>>>>;

/// Reference seeds with lazily enumerated classes. Cheap to share behind an
/// `Arc`; each class is computed at most once.
pub struct ReferenceCatalog {
    cache_dir: Option<PathBuf>,
    caps: Caps,
    slots: Mutex<HashMap<String, Slot>>,
}

impl std::fmt::Debug for ReferenceCatalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReferenceCatalog")
            .field("cache_dir", &self.cache_dir)
            .field("caps", &self.caps)
            .finish_non_exhaustive()
    }
}

impl Default for ReferenceCatalog {
    fn default() -> Self {
        Self::new()
    }
}

impl ReferenceCatalog {
    /// A catalog that keeps classes in memory only.
    pub fn new() -> Self {
        ReferenceCatalog {
            cache_dir: None,
            caps: Caps::default(),
            slots: Mutex::new(HashMap::new()),
        }
    }

    /// A catalog backed by a cache directory, created if missing.
    pub fn with_cache_dir(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache {
            path: dir.clone(),
            message: e.to_string(),
        })?;
        Ok(ReferenceCatalog {
            cache_dir: Some(dir),
            ..Self::new()
        })
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    /// The exceptional seeds with their sizes.
    pub fn seeds(&self) -> Vec<SeedInfo> {
        EXCEPTIONAL_SOURCES
            .iter()
            .map(|s| SeedInfo {
                name: s.name.to_owned(),
                vertices: format::parse_text(s.text).map(|q| q.n()).unwrap_or(0),
                family: Some(s.family),
            })
            .collect()
    }

    /// Mutation class of the named seed, from memory, the cache, or a fresh
    /// enumeration.
    pub fn class(&self, name: &str) -> Result<Arc<MutationClass>> {
        let seed = seed(name)?;
        let slot = {
            let mut slots = self.slots.lock().expect("catalog lock poisoned");
            slots.entry(name.to_owned()).or_default().clone()
        };
        let mut guard = slot.lock().expect("catalog slot poisoned");
        if let Some(class) = guard.as_ref() {
            return Ok(class.clone());
        }
        let class = match self.load_cached(name, &seed)? {
            Some(c) => c,
            None => {
                let c = self.enumerate(name, &seed)?;
                self.store(name, &c)?;
                c
            }
        };
        let class = Arc::new(class);
        *guard = Some(class.clone());
        Ok(class)
    }

    fn enumerate(&self, name: &str, seed: &Quiver) -> Result<MutationClass> {
        let opts = EnumerateOptions {
            caps: self.caps,
            parallel: true,
            canon_mode: CanonMode::Refinement,
            ..EnumerateOptions::default()
        };
        let class = mutclass::enumerate_class_with(seed, &opts)?;
        if !class.is_complete() {
            return Err(Error::TheoremViolation(format!(
                "reference class {name} did not enumerate completely ({:?})",
                class.status
            )));
        }
        Ok(class)
    }

    fn cache_path(&self, name: &str) -> Option<PathBuf> {
        let file: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        self.cache_dir
            .as_ref()
            .map(|d| d.join(format!("{file}.v{CATALOG_VERSION}.jsonl")))
    }

    fn load_cached(&self, name: &str, seed: &Quiver) -> Result<Option<MutationClass>> {
        let Some(path) = self.cache_path(name) else {
            return Ok(None);
        };
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => {
                return Err(Error::Cache {
                    path,
                    message: e.to_string(),
                })
            }
        };
        let cache_err = |message: String| Error::Cache {
            path: path.clone(),
            message,
        };
        let (header, quivers) =
            mutclass::read_dump(BufReader::new(file)).map_err(|e| cache_err(e.to_string()))?;
        let fresh = header.status == ClassStatus::Complete
            && header.version == Some(CATALOG_VERSION)
            && header.name.as_deref() == Some(name);
        if !fresh {
            return Ok(None);
        }
        let class = MutationClass::from_representatives(quivers, ClassStatus::Complete)?;
        let form = canon::canonical_form_with(seed, CanonMode::Refinement)?;
        if class.size() != header.size || !class.contains(&form) {
            return Err(cache_err(format!("class dump for {name} is inconsistent with its seed")));
        }
        Ok(Some(class))
    }

    fn store(&self, name: &str, class: &MutationClass) -> Result<()> {
        let Some(path) = self.cache_path(name) else {
            return Ok(());
        };
        let tmp = path.with_extension("jsonl.tmp");
        let io = |e: std::io::Error| Error::Cache {
            path: path.clone(),
            message: e.to_string(),
        };
        let mut out = BufWriter::new(fs::File::create(&tmp).map_err(io)?);
        mutclass::write_dump(class, Some(name), Some(CATALOG_VERSION), &mut out)?;
        out.flush().map_err(io)?;
        drop(out);
        fs::rename(&tmp, &path).map_err(io)?;
        Ok(())
    }

    /// Enumerates every exceptional class plus the given extra seeds, and
    /// checks that the tree seeds' classes do not depend on orientation.
    pub fn build(&self, extra: &[&str]) -> Result<Vec<(String, usize)>> {
        let mut sizes = Vec::new();
        for name in EXCEPTIONAL.iter().copied().chain(extra.iter().copied()) {
            sizes.push((name.to_owned(), self.class(name)?.size()));
        }
        for name in TREE_SEEDS {
            self.check_orientation_free(name)?;
        }
        Ok(sizes)
    }

    /// Compares the class of a tree seed with the class of the same tree
    /// with every arrow reversed on alternate levels.
    pub fn check_orientation_free(&self, name: &str) -> Result<()> {
        let q = seed(name)?;
        let flipped = reorient_alternating(&q)?;
        let other = self.enumerate(name, &flipped)?;
        if other.members() != self.class(name)?.members() {
            return Err(Error::TheoremViolation(format!(
                "class of {name} depends on the orientation of its seed"
            )));
        }
        Ok(())
    }
}

/// Reorients a tree so that every vertex at even depth from vertex 0 is a
/// source.
fn reorient_alternating(q: &Quiver) -> Result<Quiver> {
    let n = q.n();
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for w in q.neighbors(v) {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    let arrows = q.arrows().into_iter().map(|(i, j, w)| {
        if depth[i] % 2 == 0 {
            (i, j, w)
        } else {
            (j, i, w)
        }
    });
    Quiver::from_arrows(n, arrows)
}
