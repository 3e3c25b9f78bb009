//! Problem files for the `extend` subcommand.
//!
//! ```text
//! target [24,7,10]
//! steps 3
//! dual-word
//! row 111111111100000000000
//! automorphism 2,1,3,...
//! ```

use anyhow::{anyhow, bail, Context, Result};
use splitlp::extend::ExtensionProblem;
use splitlp::gf2::Code;
use splitlp::groups::Permutation;
use splitlp::rules::parse_code_type;

pub fn parse_problem(text: &str) -> Result<ExtensionProblem> {
    let mut target = None;
    let mut steps = None;
    let mut dual_word = false;
    let mut rows = Vec::new();
    let mut gens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ctx = || format!("line {}: {line}", i + 1);
        let (key, rest) = line.split_once(char::is_whitespace).map_or((line, ""), |(k, r)| (k, r.trim()));
        match key {
            "target" => target = Some(parse_code_type(rest).map_err(|e| anyhow!("{e}")).with_context(ctx)?),
            "steps" => steps = Some(rest.parse::<usize>().with_context(ctx)?),
            "dual-word" => dual_word = true,
            "row" => rows.push(rest.to_string()),
            "automorphism" => gens
                .push(rest.trim_end_matches(';').parse::<Permutation>().map_err(|e| anyhow!("{e}")).with_context(ctx)?),
            _ => bail!("unknown directive in {}", ctx()),
        }
    }
    let target = target.ok_or_else(|| anyhow!("missing target line"))?;
    let base = Code::parse_rows(&rows).map_err(|e| anyhow!("{e}"))?;
    let steps = steps.unwrap_or(target.n.saturating_sub(base.len()));
    Ok(ExtensionProblem::new(base, steps, target, gens)?.with_dual_word(dual_word))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_directives() {
        let p = parse_problem("target [6,4,2]\n# base\nrow 1100\nrow 0011\nautomorphism 2,1,3,4\ndual-word\n").unwrap();
        assert_eq!(p.r, 2);
        assert!(p.dual_word);
        assert_eq!(p.generators.len(), 1);
        assert!(parse_problem("target [6,3,2]\nrow 1100\nbogus\n").is_err());
    }
}
