use crate::design::{construct_sts, find_resolvable_sts, SearchBudget, Triple};
use crate::error::{DesignError, ScaffoldError};

use super::{KeywordMap, Poem, PoemLine, PoemRules, Variant};

/// Restarts tried when looking for a resolvable system.
pub const SCAFFOLD_ATTEMPTS: u32 = 5_000;

/// A keyword-only poem skeleton: one line per triple. Resolvable variants get
/// one stanza per parallel class; the others get a single stanza.
pub fn scaffold(keywords: &KeywordMap, variant: Variant, seed: u64) -> Result<Poem, ScaffoldError> {
    let order = keywords.require_admissible()?;
    let u = order.get();
    let line = |t: &Triple| {
        let text = t
            .points()
            .iter()
            .map(|&p| keywords.word(p))
            .collect::<Vec<_>>()
            .join(" ");
        PoemLine::parse(&text, keywords)
    };

    let stanzas = if variant.is_resolvable() {
        if u % 6 != 3 {
            return Err(DesignError::NotResolvableOrder(u).into());
        }
        let (resolution, _) =
            find_resolvable_sts(u, seed, SCAFFOLD_ATTEMPTS, SearchBudget::default())?;
        resolution
            .classes()
            .iter()
            .map(|class| class.iter().map(line).collect())
            .collect()
    } else {
        let system = construct_sts(u, seed)?;
        vec![system.triples().iter().map(line).collect()]
    };

    Ok(Poem {
        title: None,
        after: None,
        variant,
        keywords: keywords.clone(),
        rules: PoemRules::default(),
        stanzas,
    })
}
