#!/usr/bin/env python3
"""Build the bundled desk corpus from gettext catalogs.

The catalogs come from the Django, Sphinx, Wagtail and plone.app.locales
wheels (all BSD/GPL-compatible translation files). Extract the wheels under
one directory and pass it as the first argument:

    pip download django sphinx wagtail plone.app.locales --no-deps -d wheels
    for w in wheels/*.whl; do python3 -m zipfile -e "$w" src/$(basename "$w" .whl); done
    python3 scripts/build_desk_corpus.py src corpus/desk

Each language gets a training file (~60 KB) and a disjoint held-out file of
250 sentences. English text is taken from the source strings.
"""
import glob
import os
import random
import re
import sys

LANGS = {
    "eng": None,
    "spa": ["es"],
    "por": ["pt", "pt_BR"],
    "fra": ["fr"],
    "ita": ["it"],
    "deu": ["de"],
    "nld": ["nl"],
    "fin": ["fi"],
}
TRAIN_BYTES = 60_000
TEST_SENTENCES = 250


def unquote(s):
    return (s.replace('\\"', '"').replace("\\n", " ").replace("\\t", " ")
            .replace("\\\\", "\\"))


def parse_po(path):
    """Yields (msgid, msgstr, default) triples."""
    entries = []
    msgid, msgstr, default, field = [], [], None, None
    def flush():
        if msgstr:
            entries.append((unquote("".join(msgid)), unquote("".join(msgstr)), default))
    with open(path, encoding="utf-8", errors="replace") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("#. Default:"):
                flush(); msgid, msgstr, field = [], [], None
                default = unquote(line[len("#. Default:"):].strip().strip('"'))
            elif line.startswith("msgid "):
                if field == "str":
                    flush(); msgstr = []
                    if not line.startswith("msgid_plural"):
                        default = None
                if line.startswith("msgid_plural"):
                    field = "plural"; continue
                msgid = [line[len("msgid "):].strip()[1:-1]]; field = "id"
            elif line.startswith("msgid_plural"):
                field = "plural"
            elif line.startswith("msgstr"):
                m = re.match(r'msgstr(\[\d+\])? "(.*)"$', line)
                if m.group(1) in (None, "[0]"):
                    msgstr = [m.group(2)]; field = "str"
                else:
                    field = None
            elif line.startswith('"'):
                if field == "id":
                    msgid.append(line[1:-1])
                elif field == "str":
                    msgstr.append(line[1:-1])
            elif not line.strip():
                if field == "str":
                    flush()
                msgid, msgstr, default, field = [], [], None, None
        if field == "str":
            flush()
    return entries


MARKUP = [
    re.compile(r"<[^>]*>"),
    re.compile(r"&[a-z#0-9]+;"),
    re.compile(r"%\([^)]*\)[a-z]"),
    re.compile(r"%[a-z]"),
    re.compile(r"\$\{[^}]*\}"),
    re.compile(r"\{[^}]*\}"),
    re.compile(r"https?://\S+"),
    re.compile(r"\[\[[^\]]*\]\]"),
    re.compile(r"\\"),
]


def clean(text):
    for pat in MARKUP:
        text = pat.sub(" ", text)
    return " ".join(text.split())


def key(text):
    return re.sub(r"\W+", " ", text.lower()).strip()


def collect(src, lang):
    out = []
    if lang == "eng":
        files = sorted(glob.glob(f"{src}/**/es/LC_MESSAGES/*.po", recursive=True))
    else:
        files = []
        for code in LANGS[lang]:
            files += sorted(glob.glob(f"{src}/**/{code}/LC_MESSAGES/*.po", recursive=True))
    for path in files:
        for msgid, msgstr, default in parse_po(path):
            if not msgid.strip():
                continue
            if lang == "eng":
                text = default if default else msgid
            else:
                if not msgstr or msgstr == msgid or (default and msgstr == default):
                    continue
                text = msgstr
            text = clean(text)
            if len(text.split()) >= 3 and re.search(r"[a-zA-Z]", text):
                out.append(text)
    seen, uniq = set(), []
    for t in out:
        k = key(t)
        if k and k not in seen:
            seen.add(k)
            uniq.append(t)
    return uniq


def main(src, dest):
    os.makedirs(f"{dest}/train", exist_ok=True)
    os.makedirs(f"{dest}/test", exist_ok=True)
    for lang in LANGS:
        sentences = collect(src, lang)
        rng = random.Random(1)
        rng.shuffle(sentences)
        test = [s for s in sentences if len(s.split()) >= 6 and len(s) >= 40][:TEST_SENTENCES]
        held = set(test)
        train, size = [], 0
        for s in sentences:
            if s in held:
                continue
            if size >= TRAIN_BYTES:
                break
            train.append(s)
            size += len(s.encode()) + 1
        with open(f"{dest}/train/{lang}.txt", "w", encoding="utf-8") as f:
            f.write("\n".join(train) + "\n")
        with open(f"{dest}/test/{lang}.txt", "w", encoding="utf-8") as f:
            f.write("\n".join(test) + "\n")
        print(f"{lang}: {len(sentences)} unique, train {len(train)} lines / {size} bytes, test {len(test)}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
