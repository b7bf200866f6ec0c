"""Regenerates the synth-news and synth-bio fixtures (conll-mini is hand-written)."""
import random, os
R = random.Random(2021)
NEWS = {
 "PER": ["Alice", "Marco", "Yuki", "Omar", "Greta", "Tomas", "Lena", "Ravi", "Maria Lopez", "John Smith", "Ana Costa", "Pierre Dubois"],
 "LOC": ["Paris", "Berlin", "Lisbon", "Oslo", "Madrid", "Cairo", "Lima", "Dublin", "New York", "San Diego", "Buenos Aires", "Hong Kong"],
}
NEWS_T = [
 "{PER} visited {LOC} last week .",
 "{PER} met {PER} in {LOC} .",
 "Reports from {LOC} mention {PER} .",
 "{PER} left {LOC} on Monday .",
 "The mayor of {LOC} thanked {PER} .",
 "{PER} said the talks in {LOC} went well .",
 "Crowds gathered in {LOC} to greet {PER} .",
 "{PER} will travel to {LOC} tomorrow .",
]
NEWS_HELD = ["Yesterday {PER} arrived in {LOC} .", "{PER} praised the people of {LOC} ."]
BIO = {
 "PROTEIN": ["p53", "BRCA1", "EGFR", "KRAS", "MYC", "HER2", "NF kappa B", "cyclin D1", "interleukin 6", "tumor necrosis factor"],
 "CHEMICAL": ["aspirin", "cisplatin", "ethanol", "glucose", "caffeine", "paclitaxel", "tamoxifen", "nitric oxide", "sodium chloride", "retinoic acid"],
}
BIO_T = [
 "{CHEMICAL} inhibits {PROTEIN} expression .",
 "Binding of {PROTEIN} to {CHEMICAL} was measured .",
 "Cells treated with {CHEMICAL} showed reduced {PROTEIN} levels .",
 "{PROTEIN} activity increased after {CHEMICAL} exposure .",
 "We observed that {CHEMICAL} modulates {PROTEIN} signaling .",
 "Phosphorylation of {PROTEIN} requires {CHEMICAL} .",
 "{CHEMICAL} and {CHEMICAL} both suppress {PROTEIN} .",
 "Mutations in {PROTEIN} alter sensitivity to {CHEMICAL} .",
]
BIO_HELD = ["Low doses of {CHEMICAL} stabilize {PROTEIN} .", "Expression of {PROTEIN} depends on {CHEMICAL} ."]

def fill(template, lex):
    lines = []
    used = set()
    for piece in template.split():
        if piece.startswith("{"):
            ty = piece[1:-1]
            while True:
                ent = R.choice(lex[ty])
                if ent not in used: break
            used.add(ent)
            for k, w in enumerate(ent.split()):
                lines.append(f"{w} {'B' if k == 0 else 'I'}-{ty}")
        else:
            lines.append(f"{piece} O")
    return "\n".join(lines) + "\n"

def write(path, sents):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as f:
        f.write("\n".join(sents))

def domain(name, lex, templates, held, n_train=50, n_valid=10, n_test=20):
    train = [fill(templates[i % len(templates)], lex) for i in range(n_train)]
    valid = [fill(R.choice(templates), lex) for _ in range(n_valid)]
    test = [fill(R.choice(templates + held), lex) for _ in range(n_test)]
    base = os.path.join(os.path.dirname(os.path.abspath(__file__)), name)
    write(f"{base}/train.txt", train); write(f"{base}/valid.txt", valid); write(f"{base}/test.txt", test)

domain("synth-news", NEWS, NEWS_T, NEWS_HELD)
domain("synth-bio", BIO, BIO_T, BIO_HELD)
