"""How the valence rules shape the compound score.

Each block contrasts a base sentence with a variant that triggers one rule:
degree boosters, all-caps emphasis, negation, contrastive "but", and
punctuation emphasis. Scores use the bundled lexicon and default constants.
"""
from adoptrace.valence import classify, default_lexicon, score

lexicon = default_lexicon()


def show(label, text):
    result = score(text, lexicon)
    print(f"  {result.compound:+.4f} ({classify(result.compound).value:<8}) {text!r}  [{label}]")


print("booster words scale the next sentiment word (distance-damped):")
show("base", "the rollout was good")
show("boosted", "the rollout was very good")
show("dampened", "the rollout was slightly good")

print("\nall-caps emphasis amid mixed-case text:")
show("base", "the patch is terrible news")
show("caps", "the patch is TERRIBLE news")

print("\nnegation flips and scales:")
show("base", "good")
show("negated", "not good")
show("double", "no fear of downtime")

print("\ncontrastive 'but' reweights both halves:")
show("base", "good hardware")
show("contrast", "good hardware but awful firmware")

print("\npunctuation emphasis (exclamations capped at four, question ramps):")
show("base", "the demo was great")
show("banged", "the demo was great!!!")
show("asked", "is this outage serious???")

print("\nneutral text stays neutral:")
show("no hits", "the quarterly deployment briefing")
show("empty", "")
