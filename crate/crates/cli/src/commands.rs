use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use namebank::edit::{apply_edit_log, parse_edit_log};
use namebank::inflect::{expand_inflections, expansion_size, surface_variants, InflectionRuleSet};
use namebank::matcher::{self, Match};
use namebank::merge::{merge_batch, parse_candidates, CandidateName, MergerConfig, Resolution};
use namebank::normalize::{NormalizationRuleSet, Normalizer, TransliterationTable};
use namebank::resource::encode_surface;
use namebank::script::ResourceStats;
use namebank::trigger::{find_candidates, guess_type, train_type_model, TriggerLexicon, TypeModel};
use namebank::{EntityId, EntityType, LanguageScope, NameVariant};
use rayon::prelude::*;
use serde_json::json;

use crate::io::{escape_field, read_documents, read_texts, Format, Input, Sink};
use crate::store::Store;

pub fn compile(resource: &Path, lang: Option<LanguageScope>) -> Result<()> {
    let (repo, _) = Store::load(resource)?;
    let m = matcher::compile(&repo, lang);
    println!(
        "entities={} variants={} patterns={} states={}",
        repo.len(),
        repo.variant_count(),
        m.pattern_count(),
        m.state_count()
    );
    Ok(())
}

pub fn annotate(resource: &Path, lang: Option<LanguageScope>, format: Format, files: &[PathBuf]) -> Result<()> {
    let (repo, _) = Store::load(resource)?;
    let docs = read_documents(files)?;
    let m = matcher::compile(&repo, lang);
    let hits: Vec<Vec<Match>> = docs.par_iter().map(|d| m.find_all(&d.text)).collect();
    let mut sink = Sink::stdout(format);
    for (doc, found) in docs.iter().zip(&hits) {
        for h in found {
            sink.row(
                || {
                    format!(
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        escape_field(&doc.label),
                        h.offset,
                        h.length,
                        h.id,
                        encode_surface(&h.main_name),
                        escape_field(&h.surface_found)
                    )
                },
                || {
                    json!({
                        "doc": doc.label,
                        "offset": h.offset,
                        "length": h.length,
                        "id": h.id,
                        "main_name": h.main_name,
                        "surface": h.surface_found,
                    })
                },
            )?;
        }
    }
    sink.finish()
}

pub struct MergeArgs<'a> {
    pub resource: &'a Path,
    pub threshold: Option<f64>,
    pub rules: Option<&'a Path>,
    pub lexicon: Option<&'a Path>,
    pub types: Option<&'a Path>,
    pub format: Format,
    pub inputs: &'a [PathBuf],
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_type_model(path: &Path) -> Result<TypeModel> {
    let text = read_text(path)?;
    let (mut persons, mut orgs) = (Vec::new(), Vec::new());
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (t, name) = line
            .split_once('\t')
            .with_context(|| format!("{}: line {}: expected `type <tab> name`", path.display(), i + 1))?;
        match t.parse::<EntityType>() {
            Ok(EntityType::Person) => persons.push(name),
            Ok(EntityType::Organisation) => orgs.push(name),
            Err(e) => bail!("{}: line {}: {e}", path.display(), i + 1),
        }
    }
    train_type_model(&persons, &orgs, 1.0).with_context(|| format!("{}", path.display()))
}

/// Candidates from raw documents, one per distinct surface and language.
/// Each document a surface occurs in counts as one cluster.
fn extract(docs: &[Input], lex: &TriggerLexicon, model: Option<&TypeModel>) -> Result<Vec<CandidateName>> {
    let mut out: Vec<CandidateName> = Vec::new();
    let mut index: HashMap<(String, LanguageScope), usize> = HashMap::new();
    for doc in docs {
        let mut counted = HashSet::new();
        for mut cand in find_candidates(&doc.text, lex) {
            let key = (cand.surface.clone(), cand.language);
            match index.get(&key) {
                Some(&i) => {
                    if counted.insert(i) {
                        out[i].cluster_count += 1;
                    }
                }
                None => {
                    if model.is_some() {
                        cand.guessed_type = guess_type(&cand.surface, lex, model)?.0;
                    }
                    index.insert(key, out.len());
                    counted.insert(out.len());
                    out.push(cand);
                }
            }
        }
    }
    Ok(out)
}

pub fn merge(args: MergeArgs<'_>) -> Result<()> {
    let (mut repo, store) = Store::load(args.resource)?;
    let cfg = match args.threshold {
        Some(t) => MergerConfig::new(t)?,
        None => MergerConfig::default(),
    };
    let normalizer = match args.rules {
        Some(path) => {
            let rules =
                NormalizationRuleSet::parse(&read_text(path)?).with_context(|| format!("{}", path.display()))?;
            Normalizer::new(TransliterationTable::bundled(), rules)
        }
        None => Normalizer::default(),
    };
    let candidates = match args.lexicon {
        Some(path) => {
            let mut lex = TriggerLexicon::parse(&read_text(path)?).with_context(|| format!("{}", path.display()))?;
            lex.extend_stop_words(repo.stop_words_for(lex.language));
            let model = args.types.map(load_type_model).transpose()?;
            extract(&read_documents(args.inputs)?, &lex, model.as_ref())?
        }
        None => {
            let mut all = Vec::new();
            for input in read_texts(args.inputs)? {
                let (ok, bad) = parse_candidates(&input.text);
                for e in bad {
                    eprintln!("{}: line {}: {}; skipped", input.label, e.line, e.reason);
                }
                all.extend(ok);
            }
            all
        }
    };

    let report = merge_batch(&mut repo, &candidates, &cfg, &normalizer);
    if report.merged_count() + report.created_count() > 0 {
        store.save(&repo)?;
    }
    let mut sink = Sink::stdout(args.format);
    for (surface, r) in &report.resolutions {
        let (decision, id, score, reason) = match r {
            Resolution::Merged { id, score } => ("merged", Some(*id), Some(*score), None),
            Resolution::Created { id, best_score } => ("created", Some(*id), *best_score, None),
            Resolution::Skipped { reason } => ("skipped", None, None, Some(reason.as_str())),
        };
        sink.row(
            || {
                let id = id.map_or("-".to_string(), |i| i.to_string());
                let last = reason.map_or_else(|| format!("{:.4}", score.unwrap_or(0.0)), str::to_string);
                format!("{}\t{decision}\t{id}\t{last}", encode_surface(surface))
            },
            || match reason {
                Some(reason) => json!({ "surface": surface, "decision": decision, "id": null, "reason": reason }),
                None => json!({ "surface": surface, "decision": decision, "id": id, "score": score }),
            },
        )?;
    }
    sink.finish()
}

fn load_rule_sets(path: &Path) -> Result<Vec<InflectionRuleSet>> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut files = Vec::new();
        for entry in fs::read_dir(path).with_context(|| format!("cannot list {}", path.display()))? {
            let p = entry?.path();
            if p.is_file() {
                files.push(p);
            }
        }
        files.sort();
        if files.is_empty() {
            bail!("{}: no rule files", path.display());
        }
        files
    } else {
        vec![path.to_path_buf()]
    };
    files
        .iter()
        .map(|f| InflectionRuleSet::parse(&read_text(f)?).with_context(|| format!("{}", f.display())))
        .collect()
}

pub fn expand(resource: &Path, rules: &Path, pattern_only: bool, with_surface: bool, format: Format) -> Result<()> {
    let (mut repo, store) = Store::load(resource)?;
    let rule_sets = load_rule_sets(rules)?;
    let eligible: Vec<(EntityId, NameVariant)> = repo
        .entities()
        .flat_map(|e| {
            e.variants()
                .iter()
                .filter(|v| v.flags.frequency_eligible)
                .map(move |v| (e.id, v.clone()))
        })
        .collect();

    let mut sink = Sink::stdout(format);
    let mut added = 0usize;
    for rules in &rule_sets {
        for (id, v) in &eligible {
            if !(v.scope.is_universal() || v.scope == rules.language) {
                continue;
            }
            let exp = expand_inflections(v, rules)?;
            if pattern_only {
                sink.row(
                    || {
                        format!(
                            "{id}\t{}\t{}\t{}",
                            rules.language,
                            encode_surface(v.surface()),
                            exp.pattern
                        )
                    },
                    || json!({ "id": id, "lang": rules.language, "surface": v.surface(), "pattern": exp.pattern }),
                )?;
                continue;
            }
            if exp.enumerated.is_none() {
                eprintln!(
                    "{id} {:?}: {} forms exceed the enumeration limit; not added",
                    v.surface(),
                    expansion_size(v.surface(), rules)
                );
            }
            for g in exp.generated() {
                if repo.add_variant(*id, g.clone()) == Some(true) {
                    added += 1;
                }
            }
        }
    }
    if pattern_only {
        return sink.finish();
    }
    if with_surface {
        for (id, v) in &eligible {
            for s in surface_variants(v) {
                if repo.add_variant(*id, s) == Some(true) {
                    added += 1;
                }
            }
        }
    }
    if added > 0 {
        store.save(&repo)?;
    }
    sink.row(
        || format!("eligible={} added={added}", eligible.len()),
        || json!({ "eligible": eligible.len(), "added": added }),
    )?;
    sink.finish()
}

pub fn moderate(resource: &Path, edits: Option<&Path>) -> Result<()> {
    let (repo, store) = Store::load(resource)?;
    let files: Vec<PathBuf> = edits.map(Path::to_path_buf).into_iter().collect();
    let input = read_texts(&files)?.remove(0);
    let log = parse_edit_log(&input.text).with_context(|| input.label.clone())?;
    let updated = apply_edit_log(&repo, &log).with_context(|| input.label.clone())?;
    if updated != repo {
        store.save(&updated)?;
    }
    println!("applied={}", log.len());
    Ok(())
}

pub fn export(resource: &Path, lang: Option<LanguageScope>, format: Format) -> Result<()> {
    let (repo, _) = Store::load(resource)?;
    let mut sink = Sink::stdout(format);
    for row in repo.export_variants(lang) {
        sink.row(
            || {
                format!(
                    "{}\t{}\t{}\t{}",
                    row.id,
                    row.etype.code(),
                    row.scope,
                    encode_surface(&row.surface)
                )
            },
            || json!({ "id": row.id, "type": row.etype.code(), "lang": row.scope, "surface": row.surface }),
        )?;
    }
    sink.finish()
}

pub fn stats(resource: &Path, format: Format) -> Result<()> {
    let (repo, _) = Store::load(resource)?;
    let s = ResourceStats::compute(&repo);
    let released = repo.release_subset();
    let mut sink = Sink::stdout(format);
    let tsv = format == Format::Tsv;

    if tsv {
        sink.line("# scripts\nISO15924\tscript\tvariants\tentities")?;
    }
    for (script, t) in &s.by_script {
        sink.row(
            || format!("{}\t{}\t{}\t{}", script.code(), script.label(), t.variants, t.entities),
            || json!({ "table": "scripts", "iso15924": script.code(), "script": script.label(), "variants": t.variants, "entities": t.entities }),
        )?;
    }
    if tsv {
        sink.line("# types\ntype\tvariants\tentities")?;
    }
    for (etype, t) in &s.by_type {
        sink.row(
            || format!("{}\t{}\t{}", etype.code(), t.variants, t.entities),
            || json!({ "table": "types", "type": etype.code(), "variants": t.variants, "entities": t.entities }),
        )?;
    }
    if tsv {
        sink.line("# names per entity\nnames\tentities")?;
    }
    for (k, n) in &s.names_per_entity {
        sink.row(
            || format!("{k}\t{n}"),
            || json!({ "table": "names_per_entity", "names": k, "entities": n }),
        )?;
    }
    if tsv {
        sink.line("# totals")?;
    }
    sink.row(
        || {
            format!(
                "entities={} variants={} released_entities={} released_variants={}",
                s.entities,
                s.variants,
                released.len(),
                released.variant_count()
            )
        },
        || {
            json!({
                "table": "totals",
                "entities": s.entities,
                "variants": s.variants,
                "released_entities": released.len(),
                "released_variants": released.variant_count(),
            })
        },
    )?;
    sink.finish()
}
