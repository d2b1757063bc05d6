#!/usr/bin/env python3
"""Write the 200-pair desk NLI fixture (premise, hypothesis, label TSV).

Sentences are generated from the small hand-written templates below, so the
fixture carries no third-party text. 60 entailment, 40 contradiction and
100 neutral pairs; the same seed always produces the same file.
"""
import random
import sys

PEOPLE = [
    ("a young woman", "a woman", "she"),
    ("an elderly man", "a man", "he"),
    ("a teenage boy", "a boy", "he"),
    ("a little girl", "a girl", "she"),
    ("a bearded fisherman", "a man", "he"),
    ("a tired nurse", "a nurse", "she"),
    ("a street musician", "a musician", "he"),
    ("a city council member", "an official", "she"),
]
ACTIVITIES = [
    ("reading a newspaper", "reading", "sleeping"),
    ("repairing a bicycle", "fixing something", "riding a horse"),
    ("painting a fence", "painting", "swimming"),
    ("playing the violin", "playing music", "eating dinner"),
    ("selling vegetables", "selling food", "driving a truck"),
    ("walking a dog", "outside with a dog", "sitting indoors alone"),
    ("cooking soup", "making food", "skiing down a mountain"),
    ("writing a letter", "writing", "dancing on a stage"),
    ("carrying groceries", "holding bags", "flying a kite"),
    ("climbing a ladder", "climbing", "lying in bed"),
]
PLACES = [
    "in a crowded market",
    "on a rainy street",
    "at a train station",
    "beside a river",
    "in a small kitchen",
    "outside a library",
    "near a busy harbor",
    "in a quiet park",
]
EXTRAS = [
    "for a birthday party",
    "before the sun sets",
    "while talking on the phone",
    "to earn extra money",
    "after a long shift",
    "with a group of friends",
    "for the first time",
    "during a holiday weekend",
]
NEWS = [
    ("The city council approved a new budget on Monday.", "The council approved a budget.", "The council rejected the budget."),
    ("Heavy rain flooded several roads near the harbor.", "Roads near the harbor flooded.", "The roads near the harbor stayed dry."),
    ("The museum will close for renovations next spring.", "The museum is going to close.", "The museum will stay open all year."),
    ("Two local teams met in the regional football final.", "There was a football final.", "No football match was played."),
    ("The bakery on Elm Street raised its bread prices.", "Bread got more expensive at the bakery.", "The bakery lowered its bread prices."),
    ("Firefighters contained the warehouse fire within an hour.", "A warehouse fire was contained.", "The warehouse fire burned for days."),
    ("The school district hired forty new teachers.", "The district hired teachers.", "The district laid off forty teachers."),
    ("A new bus line connects the airport to downtown.", "A bus goes to the airport.", "There is no way to reach the airport by bus."),
    ("The festival attracted a record number of visitors.", "Many people visited the festival.", "Hardly anyone attended the festival."),
    ("Engineers inspected the bridge after the storm.", "The bridge was inspected.", "Nobody inspected the bridge."),
]
NEWS_NEUTRAL = [
    "The decision was praised by local business owners.",
    "Officials expect the work to cost more than planned.",
    "Residents were invited to comment at a public meeting.",
    "The announcement came after months of debate.",
    "Several volunteers helped organize the event.",
]


def scene(rng):
    person = rng.choice(PEOPLE)
    act = rng.choice(ACTIVITIES)
    place = rng.choice(PLACES)
    extra = rng.choice(EXTRAS)
    return person, act, place, extra


def cap(s):
    return s[0].upper() + s[1:]


def entailment(rng):
    if rng.random() < 0.3:
        p, h, _ = rng.choice(NEWS)
        return p, h
    person, act, place, _ = scene(rng)
    premise = cap(f"{person[0]} is {act[0]} {place}.")
    hypothesis = rng.choice([
        cap(f"{person[1]} is {act[1]}."),
        cap(f"{person[1]} is {act[0]}."),
        cap(f"someone is {act[1]} {place}."),
    ])
    return premise, hypothesis


def contradiction(rng):
    if rng.random() < 0.3:
        p, _, h = rng.choice(NEWS)
        return p, h
    person, act, place, _ = scene(rng)
    premise = cap(f"{person[0]} is {act[0]} {place}.")
    hypothesis = rng.choice([
        cap(f"{person[1]} is {act[2]}."),
        cap(f"nobody is {act[1]} {place}."),
        cap(f"{person[1]} is {act[2]} {place}."),
    ])
    return premise, hypothesis


def neutral(rng):
    if rng.random() < 0.3:
        p, _, _ = rng.choice(NEWS)
        return p, rng.choice(NEWS_NEUTRAL)
    person, act, place, extra = scene(rng)
    premise = cap(f"{person[0]} is {act[0]} {place}.")
    hypothesis = rng.choice([
        cap(f"{person[1]} is {act[1]} {extra}."),
        cap(f"{person[2]} is {act[0]} {extra}."),
        cap(f"{person[1]} {place} is waiting for a friend."),
    ])
    return premise, hypothesis


def main(out):
    rng = random.Random(200)
    rows = (
        [(*entailment(rng), "entailment") for _ in range(60)]
        + [(*contradiction(rng), "contradiction") for _ in range(40)]
        + [(*neutral(rng), "neutral") for _ in range(100)]
    )
    rng.shuffle(rows)
    with open(out, "w", encoding="utf-8") as f:
        f.write("premise\thypothesis\tlabel\n")
        for p, h, label in rows:
            f.write(f"{p}\t{h}\t{label}\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/data/desk_nli_200.tsv")
