//! Built-in diagrams.

use crate::error::{Error, Result};
use crate::linkdiag::{parse_pd, parse_pd_with_loops, EdgeLabel, LinkDiagram};

/// Closure of a braid on `strands` strands. Generator `i > 0` is `σ_i`
/// (the left strand crosses over the right one), `-i` is its inverse.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<LinkDiagram> {
    if strands == 0 {
        return Err(Error::InvalidDiagram("braid needs at least one strand".into()));
    }
    let mut current: Vec<EdgeLabel> = (1..=strands as EdgeLabel).collect();
    let mut touched = vec![false; strands];
    let mut next_label = strands as EdgeLabel + 1;
    let mut crossings = vec![];
    for &g in word {
        let i = g.unsigned_abs() as usize;
        if i == 0 || i >= strands {
            return Err(Error::InvalidDiagram(format!("braid generator {g} out of range for {strands} strands")));
        }
        let (l, r) = (i - 1, i);
        let (el, er) = (current[l], current[r]);
        let (nl, nr) = (next_label, next_label + 1);
        next_label += 2;
        crossings.push(if g > 0 { [er, nr, nl, el] } else { [el, er, nr, nl] });
        current[l] = nl;
        current[r] = nr;
        touched[l] = true;
        touched[r] = true;
    }
    // close up: the final edge at each position is the initial one
    let rename = |e: EdgeLabel| match current.iter().position(|&c| c == e) {
        Some(p) if touched[p] => p as EdgeLabel + 1,
        _ => e,
    };
    let crossings: Vec<[EdgeLabel; 4]> = crossings.iter().map(|x| x.map(rename)).collect();
    let free = touched.iter().filter(|&&t| !t).count();
    LinkDiagram::new(crossings, free, None)
}

/// Names and PD codes (or braid words) of the built-in diagrams.
pub struct DiagramLibrary;

struct Entry {
    name: &'static str,
    description: &'static str,
    source: Source,
}

enum Source {
    Pd(&'static str, usize),
    Braid(usize, &'static [i32]),
    Mirror(&'static str),
}

const ENTRIES: &[Entry] = &[
    Entry { name: "unknot", description: "crossingless unknot", source: Source::Pd("PD[]", 1) },
    Entry { name: "unknot-1", description: "unknot with one kink", source: Source::Pd("PD[X[1,1,2,2]]", 0) },
    Entry { name: "unknot-2", description: "unknot with two opposite kinks", source: Source::Braid(3, &[1, -2]) },
    Entry { name: "unlink-2", description: "two-component unlink", source: Source::Pd("PD[]", 2) },
    Entry { name: "unlink-3", description: "three-component unlink", source: Source::Pd("PD[]", 3) },
    Entry {
        name: "unlink-2-r2",
        description: "two-component unlink with a Reidemeister II overlap",
        source: Source::Braid(2, &[1, -1]),
    },
    Entry { name: "hopf-plus", description: "positive Hopf link", source: Source::Pd("PD[X[2,4,1,3],X[4,2,3,1]]", 0) },
    Entry {
        name: "hopf-plus-braid",
        description: "positive Hopf link as the closure of σ1²",
        source: Source::Braid(2, &[1, 1]),
    },
    Entry {
        name: "hopf-plus-stabilized",
        description: "positive Hopf link, Markov-stabilized (3 crossings)",
        source: Source::Braid(3, &[1, 1, 2]),
    },
    Entry {
        name: "hopf-plus-r2",
        description: "positive Hopf link with Reidemeister moves (6 crossings)",
        source: Source::Braid(4, &[1, 2, -2, 1, 2, 3]),
    },
    Entry { name: "hopf-minus", description: "negative Hopf link", source: Source::Mirror("hopf-plus") },
    Entry {
        name: "hopf-minus-braid",
        description: "negative Hopf link as the closure of σ1⁻²",
        source: Source::Mirror("hopf-plus-braid"),
    },
    Entry {
        name: "hopf-minus-stabilized",
        description: "negative Hopf link, Markov-stabilized (3 crossings)",
        source: Source::Mirror("hopf-plus-stabilized"),
    },
    Entry {
        name: "hopf-minus-r2",
        description: "negative Hopf link with Reidemeister moves (6 crossings)",
        source: Source::Mirror("hopf-plus-r2"),
    },
    Entry {
        name: "trefoil-left",
        description: "left-handed trefoil",
        source: Source::Pd("PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,3]]", 0),
    },
    Entry { name: "trefoil-right", description: "right-handed trefoil", source: Source::Mirror("trefoil-left") },
    Entry {
        name: "figure-eight",
        description: "figure-eight knot",
        source: Source::Pd("PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]", 0),
    },
    Entry { name: "torus-2-4", description: "T(2,4) torus link", source: Source::Braid(2, &[1, 1, 1, 1]) },
    Entry {
        name: "whitehead",
        description: "Whitehead link",
        source: Source::Pd("PD[X[6,1,7,2],X[10,7,5,8],X[4,5,1,6],X[2,10,3,9],X[8,4,9,3]]", 0),
    },
    Entry {
        name: "knot-12-alternating",
        description: "12-crossing closure of (σ1σ2⁻¹)⁵σ1²",
        source: Source::Braid(3, &[1, -2, 1, -2, 1, -2, 1, -2, 1, -2, 1, 1]),
    },
    Entry {
        name: "knot-12-positive",
        description: "12-crossing closure of (σ1σ2)⁵σ1²",
        source: Source::Braid(3, &[1, 2, 1, 2, 1, 2, 1, 2, 1, 2, 1, 1]),
    },
];

impl DiagramLibrary {
    pub fn names() -> Vec<&'static str> {
        ENTRIES.iter().map(|e| e.name).collect()
    }

    pub fn description(name: &str) -> Option<&'static str> {
        ENTRIES.iter().find(|e| e.name == name).map(|e| e.description)
    }

    pub fn get(name: &str) -> Result<LinkDiagram> {
        let entry = ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownDiagram(name.to_string()))?;
        let d = match entry.source {
            Source::Pd(text, 0) => parse_pd(text)?,
            Source::Pd(text, loops) => parse_pd_with_loops(text, loops)?,
            Source::Braid(strands, word) => braid_closure(strands, word)?,
            Source::Mirror(of) => Self::get(of)?.mirror(),
        };
        Ok(d.with_name(name))
    }

    /// Every entry, in listing order.
    pub fn all() -> Vec<LinkDiagram> {
        ENTRIES.iter().map(|e| Self::get(e.name).expect("library entries are valid")).collect()
    }
}
