"""Command-line pipeline: validate -> reason -> graph -> lda -> tag.

Exit codes are a stable contract:
  0  success
  1  parse errors in the ontology
  2  I/O failure (unreadable/missing input, unwritable output)
  3  reasoner found violations (report is still written)
  4  empty concept graph
  5  corpus empty after filtering
  6  constraint regions exceed the branch budget
  64 flag misuse (``--constrained`` without ``--ontology``)

Diagnostics print to standard error one per line as
``severity:line:col:code:message``.  Violations print one per line as
``kind<TAB>entities<TAB>witness facts``.  All randomness flows from
``--seed`` (default 42); outputs are byte-stable for identical inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constraints as constraints_mod
from . import corpus as corpus_mod
from . import forest as forest_mod
from . import gibbs as gibbs_mod
from . import graphmap, ofn, reasoner
from .model import MetricsReport, build_lexicon, compute_metrics


# --- metrics text format ----------------------------------------------------


def format_metrics(report: MetricsReport) -> str:
    rows = report.as_dict()
    width = max(len(k) for k in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows.items()) + "\n"


def parse_metrics_text(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.rstrip().rpartition("  ")
        key = key.rstrip()
        value = value.strip()
        out[key] = int(value) if value.lstrip("-").isdigit() else value
    return out


# --- shared helpers ---------------------------------------------------------


def _load_ontology(path, stderr):
    try:
        result = ofn.parse_file(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=stderr)
        return None, 2
    for diag in result.diagnostics:
        print(str(diag), file=stderr)
    if result.ontology is None:
        return None, 1
    return result.ontology, 0


def _write_bytes(path, payload: bytes, stderr, stdout):
    if path is None or path == "-":
        stdout.buffer.write(payload) if hasattr(stdout, "buffer") \
            else stdout.write(payload.decode("utf-8"))
        return 0
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=stderr)
        return 2
    return 0


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, indent=2, sort_keys=True) + "\n").encode("utf-8")


# --- subcommands ------------------------------------------------------------


def cmd_validate(args, stdout, stderr) -> int:
    _, code = _load_ontology(args.ontology, stderr)
    return code


def cmd_metrics(args, stdout, stderr) -> int:
    o, code = _load_ontology(args.ontology, stderr)
    if code:
        return code
    stdout.write(format_metrics(compute_metrics(o)))
    return 0


def cmd_reason(args, stdout, stderr) -> int:
    o, code = _load_ontology(args.ontology, stderr)
    if code:
        return code
    store = reasoner.saturate(o, strict=args.strict)
    by_kind = {"IsA": 0, "Rel": 0, "Sub": 0}
    for f in store.facts:
        by_kind[type(f).__name__] += 1
    violations = sorted(
        store.violations,
        key=lambda v: (v.kind, tuple(str(x) for x in v.involved)))
    report = {
        "facts": {**by_kind, "total": len(store.facts)},
        "strict": bool(args.strict),
        "violations": [
            {"kind": v.kind,
             "involved": [str(x) for x in v.involved],
             "witnesses": [str(w) for w in v.witnesses]}
            for v in violations],
    }
    for v in violations:
        entities = ",".join(str(x) for x in v.involved)
        witnesses = ",".join(str(w) for w in v.witnesses)
        stdout.write(f"{v.kind}\t{entities}\t{witnesses}\n")
    if args.out:
        code = _write_bytes(args.out, _json_bytes(report), stderr, stdout)
        if code:
            return code
    return 3 if violations else 0


def cmd_graph(args, stdout, stderr) -> int:
    o, code = _load_ontology(args.ontology, stderr)
    if code:
        return code
    store = reasoner.saturate(o)
    g = graphmap.build_concept_graph(store,
                                     include_individuals=args.individuals)
    partition = None
    if args.cluster:
        try:
            partition = graphmap.cluster(g, seed=args.seed)
        except graphmap.EmptyGraph as exc:
            print(f"error: {exc}", file=stderr)
            return 4
    elif not g.nodes:
        print("error: concept graph is empty", file=stderr)
        return 4
    payload = graphmap.export(g, partition, args.format)
    return _write_bytes(args.out, payload, stderr, stdout)


def _read_corpus(args, stderr):
    try:
        records = corpus_mod.read_records(args.corpus,
                                          json_lines=args.json_lines)
    except OSError as exc:
        print(f"error: cannot read {args.corpus}: {exc}", file=stderr)
        return None, 2
    except (json.JSONDecodeError, KeyError) as exc:
        print(f"error: malformed corpus {args.corpus}: {exc}", file=stderr)
        return None, 2
    cfg = corpus_mod.IngestConfig(min_df=args.min_df)
    try:
        return corpus_mod.ingest_corpus(records, cfg), 0
    except corpus_mod.EmptyCorpus as exc:
        print(f"error: {exc}", file=stderr)
        return None, 5


def _model_payload(state, corpus, lexicon, args, constrained):
    phi = gibbs_mod.phi_matrix(state)
    tops = gibbs_mod.top_words(state, corpus, args.top)
    topics = []
    tags = (gibbs_mod.tag_topics(state, corpus, lexicon, args.top)
            if lexicon else None)
    for k in range(state.K):
        entry = {"id": k,
                 "top_words": [[w, p] for w, p in tops[k]]}
        if tags is not None:
            entry["tags"] = [[str(c), s] for c, s in tags[k]]
        topics.append(entry)
    return {
        "meta": {"k": state.K, "alpha": state.alpha, "beta": state.beta,
                 "iters": state.iters, "seed": state.seed,
                 "constrained": constrained},
        "vocabulary": list(corpus.vocabulary),
        "phi": phi,
        "topics": topics,
        "log_likelihood": gibbs_mod.log_likelihood(state, corpus),
    }


def cmd_lda(args, stdout, stderr) -> int:
    if args.constrained and not args.ontology:
        print("error: --constrained requires --ontology", file=stderr)
        return 64
    corpus, code = _read_corpus(args, stderr)
    if code:
        return code
    lexicon = None
    if args.ontology:
        o, code = _load_ontology(args.ontology, stderr)
        if code:
            return code
        lexicon = build_lexicon(o, corpus_mod.DEFAULT_STOPWORDS)
    alpha = args.alpha if args.alpha is not None else 50.0 / args.k
    try:
        if args.constrained:
            cs = constraints_mod.derive_constraints(o, lexicon,
                                                    corpus.vocabulary)
            df = forest_mod.build_forest(cs, corpus.vocabulary,
                                         beta=args.beta, eta=args.eta,
                                         epsilon=args.epsilon)
            state = gibbs_mod.dflda_gibbs(corpus, df, K=args.k, alpha=alpha,
                                          iters=args.iters, seed=args.seed)
        else:
            state = gibbs_mod.lda_gibbs(corpus, K=args.k, alpha=alpha,
                                        beta=args.beta, iters=args.iters,
                                        seed=args.seed)
    except forest_mod.TooManyCliques as exc:
        print(f"error: {exc}", file=stderr)
        return 6
    payload = _model_payload(state, corpus, lexicon, args, args.constrained)
    return _write_bytes(args.out, _json_bytes(payload), stderr, stdout)


def cmd_tag(args, stdout, stderr) -> int:
    try:
        with open(args.model, encoding="utf-8") as fh:
            model = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read {args.model}: {exc}", file=stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: malformed model file {args.model}: {exc}", file=stderr)
        return 2
    o, code = _load_ontology(args.ontology, stderr)
    if code:
        return code
    lexicon = build_lexicon(o, corpus_mod.DEFAULT_STOPWORDS)
    vocabulary = model["vocabulary"]
    index = {w: i for i, w in enumerate(vocabulary)}
    phi = model["phi"]
    tagged = []
    for k, row in enumerate(phi):
        ranked = sorted(range(len(vocabulary)), key=lambda w: (-row[w], w))
        topn = {vocabulary[w] for w in ranked[:args.top]}
        scored = []
        for concept in sorted(lexicon, key=str):
            tokens = lexicon[concept]
            hit = [t for t in tokens if t in topn]
            if not hit:
                continue
            score = sum(row[index[t]] for t in hit) / len(tokens)
            scored.append([str(concept), score])
        scored.sort(key=lambda cs: (-cs[1], cs[0]))
        tagged.append({"id": k, "tags": scored})
    return _write_bytes(args.out, _json_bytes({"topics": tagged}),
                        stderr, stdout)


# --- argument parsing -------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontomap",
        description="Ontology toolkit: parsing, reasoning, concept graphs, "
                    "and constrained topic models.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse an ontology, report diagnostics")
    p.add_argument("ontology")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metrics", help="print ontology metrics")
    p.add_argument("ontology")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("reason", help="saturate and report violations")
    p.add_argument("ontology")
    p.add_argument("--strict", action="store_true",
                   help="also flag domain/range derivations not otherwise "
                        "entailed")
    p.add_argument("--out", help="write JSON report here")
    p.set_defaults(func=cmd_reason)

    p = sub.add_parser("graph", help="export the concept graph")
    p.add_argument("ontology")
    p.add_argument("--cluster", action="store_true")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", default="dot",
                   choices=["graphml", "dot", "nodelink-json"])
    p.add_argument("--individuals", action="store_true")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("lda", help="fit a topic model on a corpus")
    p.add_argument("corpus", help="TSV doc_id<TAB>text (or JSON lines)")
    p.add_argument("--json-lines", action="store_true")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--alpha", type=float, default=None,
                   help="default 50/k")
    p.add_argument("--beta", type=float, default=0.01)
    p.add_argument("--eta", type=float, default=100.0)
    p.add_argument("--epsilon", type=float, default=1e-6)
    p.add_argument("--iters", type=int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--min-df", type=int, default=2)
    p.add_argument("--ontology", help="adds concept tags to the output")
    p.add_argument("--constrained", action="store_true",
                   help="derive constraints from --ontology and use the "
                        "forest prior")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_lda)

    p = sub.add_parser("tag", help="tag an existing model output with "
                                   "ontology concepts")
    p.add_argument("model", help="JSON produced by the lda subcommand")
    p.add_argument("--ontology", required=True)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_tag)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    args = build_parser().parse_args(argv)
    return args.func(args, stdout, stderr)


def entrypoint():
    raise SystemExit(main())


if __name__ == "__main__":
    entrypoint()
