//! Resolution of class arguments: an ID list or a named predicate.

use enrifact::factor::{ordinary_strong_monos, strong_epi_class, strong_mono_class};
use enrifact::{EnrichedCategory, MorId, MorphismClass};

pub const PREDICATES: &[&str] = &[
    "all",
    "isos",
    "monos",
    "epis",
    "injections",
    "surjections",
    "v-monos",
    "v-epis",
    "strong-monos",
    "strong-epis",
    "ordinary-strong-monos",
];

/// Splits on commas outside brackets, since finset IDs such as
/// `2->3:[1,2]` contain commas themselves.
pub fn split_ids(list: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in list.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    out.push(cur);
    out.into_iter()
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

pub fn morphism(b: &EnrichedCategory, id: &str) -> Result<MorId, String> {
    b.underlying()
        .morphism_id(id)
        .ok_or_else(|| format!("unknown morphism ID `{id}`"))
}

fn predicate(b: &EnrichedCategory, name: &str) -> Option<MorphismClass> {
    let u = b.underlying();
    let flagged = |p: fn(&enrifact::fincat::MorphismFlags) -> bool| {
        MorphismClass::predicate(name, u.morphism_ids().filter(|&f| p(&u.flags(f))))
    };
    Some(match name {
        "all" => MorphismClass::predicate(name, u.morphism_ids()),
        "isos" => MorphismClass::predicate(name, u.isos()),
        // In a category of finite sets these are exactly the injective and
        // surjective functions.
        "monos" | "injections" => flagged(|f| f.mono),
        "epis" | "surjections" => flagged(|f| f.epi),
        "v-monos" => MorphismClass::predicate(name, b.v_monos()),
        "v-epis" => MorphismClass::predicate(name, b.v_epis()),
        "strong-monos" => strong_mono_class(b),
        "strong-epis" => strong_epi_class(b),
        "ordinary-strong-monos" => ordinary_strong_monos(b),
        _ => return None,
    })
}

/// A class argument: a predicate name, or a comma-separated ID list.
pub fn resolve(b: &EnrichedCategory, spec: &str) -> Result<MorphismClass, String> {
    if let Some(c) = predicate(b, spec.trim()) {
        return Ok(c);
    }
    let ids = split_ids(spec);
    let members = ids.iter().map(|id| morphism(b, id)).collect::<Result<Vec<_>, _>>()?;
    Ok(MorphismClass::user(members))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitting_respects_brackets() {
        assert_eq!(split_ids("2->3:[1,2], a ,,b"), vec!["2->3:[1,2]", "a", "b"]);
        assert!(split_ids("").is_empty());
    }
}
