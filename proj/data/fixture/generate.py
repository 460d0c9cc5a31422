# Copyright 2026 The facetgraph Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the bundled 30-product fixture.

Products are written with inline markup: [P:...] marks a purpose span and
[M:...] a mechanism span. Word vectors are synthetic: each topic owns an
orthonormal direction, and a word is a weighted mix of topics plus a little
noise. Output is deterministic.
"""

import json
import pathlib
import re

import numpy as np

HERE = pathlib.Path(__file__).resolve().parent
DIM = 50

PRODUCTS = [
    ("q01-desk-lamp", "Bright LED desk lamp",
     "A slim lamp for the home office that helps [P:light your desk] and [P:illuminate late reading] "
     "using an [M:energy saving led bulb] on an [M:adjustable arm]. The base is weighted so it never tips over."),
    ("q02-night-light", "Hallway night light",
     "Plug it in near the stairs and it will [P:light the hallway at night] so nobody trips. "
     "A [M:motion sensor] switches on a [M:soft led light] only when someone walks past, then fades out."),
    ("q03-solar-bulbs", "Solar light bulbs",
     "Light bulbs with [M:built-in solar chips] that [P:brighten garden paths] after dark. "
     "They soak up [M:solar energy] during the day, so there is no wiring and no bill."),
    ("q04-uv-phone-sanitizer", "UV phone sanitizer",
     "Drop your phone into the case to [P:sanitize your phone] and [P:kill germs] in minutes. "
     "A [M:uv light] inside the lid does the work while the phone keeps charging."),
    ("q05-billiard-laser", "Billiard laser instructor",
     "A projector mounted above the table to [P:practice billiard shots] and [P:aim better]. "
     "A [M:laser projector] draws the ideal cue path on the felt so beginners learn angles fast."),
    ("q06-uv-barbell-box", "UV barbell box",
     "A UV box for the gym to [P:clean and sanitize barbells] between sets. Bars slide into a "
     "[M:uv light] tunnel built into a [M:steel rack], and a lamp turns green when done."),
    ("q07-solar-charger", "Solar phone charger",
     "Fold it open on a sunny window to [P:charge your phone] anywhere. A [M:solar panel] feeds a "
     "[M:usb charger] port, and a small cell stores the extra."),
    ("q08-solar-generator", "Portable solar generator",
     "A rolling unit for [P:generating power] at campsites and to [P:power small appliances] during "
     "outages. [M:Solar panels] fill a [M:large battery bank] that runs a fridge all night."),
    ("q09-water-filter", "Countertop water filter",
     "Pour tap water in the top to [P:provide safe drinking water] for the whole family. A "
     "[M:carbon water filter] removes lead and chlorine, and a gauge shows when to swap it."),
    ("q10-dish-washer", "Compact dish washer",
     "A small unit for apartments for [P:cleaning dishes] without a full dishwasher. "
     "[M:Pressurized water jets] and a [M:quiet pump] finish a load in twenty minutes."),
    ("q11-hydrogen-lighter", "Hydrogen lighter",
     "A lighter that can [P:ignite candles and stoves] with no butane. It burns "
     "[M:hydrogen generated from water] and [M:sunlight], so refilling is just adding water."),
    ("q12-rfid-pet-tracker", "RFID pet tracker",
     "A collar tag to [P:track your pet] and [P:locate lost pets] around the neighborhood. "
     "An [M:rfid tag] talks to home readers and a [M:gps module] covers longer trips."),
    ("q13-rfid-luggage-lock", "RFID luggage lock",
     "A digital lock to [P:secure your luggage] while traveling. Tap your card to open it with "
     "[M:rfid access] instead of fiddling with a [M:combination dial]."),
    ("q14-rfid-key-finder", "RFID key finder",
     "A keychain to [P:locate lost keys] around the house. Wave the base and an [M:rfid chip] "
     "on the ring beeps until you find it."),
    ("q15-rfid-checkout", "RFID checkout",
     "A cart system to [P:speed up grocery checkout] at busy stores. Every item carries a tag read "
     "by an [M:rfid reader] at the exit, so there is no line."),
    ("q16-coffee-machine-alarm", "Coffee machine alarm",
     "An alarm clock joined to a brewer that will [P:wake you up] with a [P:coffee alarm] instead "
     "of a buzzer, then [P:send vital data] about your sleep. A [M:programmable timer] starts the "
     "[M:drip brewer] early."),
    ("q17-alarm-coffee-maker", "Alarm coffee maker",
     "Set it at night to [P:schedule coffee] for the morning, [P:alert you each morning] and "
     "[P:dispense pills] from a side tray, using a [M:programmable timer] and a [M:thermal carafe]."),
    ("q18-breakfast-pill-station", "Breakfast pill station",
     "A kitchen station that can [P:remind you every day], [P:dispense pills] on time, "
     "[P:keep tea hot] and act as a [P:real-time health checker] with a [M:weight sensor] "
     "in each compartment."),
    ("q19-smart-medicine-injector", "Smart medicine injector",
     "A pen that can [P:deliver medicine doses] on set time intervals. It will [P:notify caregivers] "
     "about missed shots and [P:continuously monitor glucose] with a [M:skin patch sensor] and a "
     "[M:bluetooth radio]."),
    ("q20-smart-mug", "Smart reminder mug",
     "A mug that can [P:keep tea hot] all morning and [P:sound a reminder alarm] when it is time to "
     "drink, while [P:heart rate monitoring] through the handle uses an [M:optical sensor] and a "
     "[M:heating coil]."),
    ("q21-morning-routine-hub", "Morning routine hub",
     "A bedside hub to [P:send reminder alerts] for morning meds, [P:brew fresh coffee] at the same "
     "time, [P:inject insulin] safely and [P:send vital data] to your doctor, built around a "
     "[M:smart speaker]."),
    ("q22-travel-kettle", "Travel kettle",
     "A folding kettle to [P:make hot tea] in hotel rooms. A [M:heating element] in the silicone "
     "base reaches a boil in four minutes."),
    ("q23-fitness-band", "Fitness band",
     "A wristband to [P:track distance walked] and keep up [P:heart rate monitoring] during "
     "workouts with an [M:optical sensor] and an [M:accelerometer]."),
    ("q24-power-bank", "Pocket power bank",
     "A slim pack to [P:charge your phone] on long trips and [P:charge devices on the go]. A "
     "[M:lithium battery] feeds a [M:usb charger] port with a cable tucked in the side."),
    ("q25-charging-pad", "Wireless charging pad",
     "Set your phone on the pad to [P:charge devices] without cables. A [M:wireless charger] coil "
     "sits under a fabric top."),
    ("q26-car-charger", "Car charger",
     "A plug for the dashboard to [P:charge your phone in the car]. A [M:usb charger] with two "
     "ports fits any socket."),
    ("q27-window-cleaning-robot", "Window cleaning robot",
     "A robot that clings to glass to [P:clean windows] on high floors. [M:Suction pads] hold it in "
     "place while [M:microfiber pads] wipe the pane."),
    ("q28-shoe-cleaner", "Shoe cleaner",
     "A doormat box to [P:clean your shoes] before you step inside. [M:Rotating brushes] scrub the "
     "soles and a tray catches the mud."),
    ("q29-place-value-mat", "Place value mat",
     "A floor mat for [P:learning place values] with big numbered squares. Kids hop between "
     "[M:foam tiles] to build numbers."),
    ("q30-laundry-folder", "Laundry folding board",
     "A flat board that helps you [P:fold laundry] in seconds. Three [M:hinged boards] flip over "
     "the shirt and leave a neat stack."),
]

TOPICS = [
    "LIGHT", "CLEAN", "SOLAR", "POWER", "WATER", "DRINK", "FILTER", "PUMP", "FIRE", "KITCHEN",
    "RFID", "LOCATE", "PET", "SECURE", "TRAVEL", "SHOP", "ALERT", "TIME", "HOT", "HEAT",
    "HEALTH", "DATA", "MED", "SENSOR", "MOTION", "ELECTRONIC", "WIRELESS", "SOUND", "TIMER",
    "SPORT", "LEARN", "HOME", "GARDEN", "DEVICE", "PART",
]

# word -> (norm, {topic: weight}); an empty mix gives the word its own direction
LEXICON = {
    "light": (1.0, {"LIGHT": 1}), "lights": (1.0, {"LIGHT": 1}), "lamp": (1.0, {"LIGHT": 1}),
    "illuminate": (1.0, {"LIGHT": 1}), "brighten": (1.0, {"LIGHT": 1}),
    "led": (1.0, {"LIGHT": 1, "ELECTRONIC": .2}), "bulb": (1.0, {"LIGHT": 1}),
    "bulbs": (1.0, {"LIGHT": 1}), "night": (0.8, {"LIGHT": .6, "TIME": .5}),
    "desk": (0.6, {"HOME": 1}), "hallway": (0.6, {"HOME": 1}), "late": (0.4, {"TIME": 1}),
    "reading": (0.5, {"LEARN": .6, "HOME": .4}), "energy": (1.0, {"SOLAR": .6, "POWER": .6}),
    "saving": (0.3, {}), "adjustable": (1.0, {"PART": 1}), "arm": (1.0, {"PART": 1}),
    "motion": (1.0, {"SENSOR": .7, "MOTION": .5}), "sensor": (1.0, {"SENSOR": 1}),
    "soft": (0.3, {}), "built-in": (0.3, {}), "solar": (1.2, {"SOLAR": 1}),
    "chips": (0.8, {"ELECTRONIC": .6, "SOLAR": .3}), "garden": (1.0, {"GARDEN": 1}),
    "paths": (0.8, {"GARDEN": 1}), "sanitize": (1.2, {"CLEAN": 1}), "phone": (0.6, {"DEVICE": 1}),
    "kill": (0.8, {"CLEAN": .8}), "germs": (1.0, {"CLEAN": 1}),
    "uv": (1.0, {"LIGHT": .8, "CLEAN": .35}), "practice": (1.0, {"SPORT": .6, "LEARN": .5}),
    "billiard": (1.2, {"SPORT": 1}), "shots": (1.0, {"SPORT": 1}), "aim": (1.0, {"SPORT": 1}),
    "better": (0.3, {}), "laser": (1.0, {"LIGHT": .8, "ELECTRONIC": .3}),
    "projector": (1.0, {"LIGHT": .6, "ELECTRONIC": .4}), "clean": (1.2, {"CLEAN": 1}),
    "cleaning": (1.2, {"CLEAN": 1}), "barbells": (0.6, {"SPORT": 1}), "steel": (1.0, {"PART": 1}),
    "rack": (1.0, {"PART": 1}), "charge": (1.2, {"POWER": 1}), "charging": (1.2, {"POWER": 1}),
    "panel": (1.0, {"SOLAR": .7, "PART": .3}), "panels": (1.0, {"SOLAR": .7, "PART": .3}),
    "usb": (0.8, {"POWER": .5, "ELECTRONIC": .6}), "charger": (1.2, {"POWER": 1}),
    "generating": (1.0, {"POWER": .8}), "power": (1.2, {"POWER": 1}), "small": (0.3, {}),
    "appliances": (0.7, {"HOME": .6, "POWER": .4}), "large": (0.3, {}),
    "battery": (1.0, {"POWER": .7, "ELECTRONIC": .4}), "bank": (0.6, {"POWER": .6}),
    "provide": (0.3, {}), "safe": (0.3, {}), "drinking": (1.2, {"DRINK": 1}),
    "water": (1.2, {"WATER": 1}), "carbon": (0.6, {"FILTER": .8, "WATER": .2}),
    "filter": (1.0, {"FILTER": .8, "WATER": .3}), "dishes": (0.8, {"CLEAN": .5, "KITCHEN": .6}),
    "pressurized": (0.6, {"WATER": .5, "PUMP": .5}), "jets": (0.8, {"WATER": .5, "PUMP": .5}),
    "quiet": (0.3, {}), "pump": (1.0, {"PUMP": 1}), "ignite": (1.2, {"FIRE": 1}),
    "candles": (1.0, {"FIRE": .8, "LIGHT": .25}), "stoves": (1.0, {"FIRE": .6, "KITCHEN": .5}),
    "hydrogen": (1.0, {"WATER": .4, "FIRE": .4, "POWER": .2}), "generated": (0.3, {}),
    "sunlight": (1.0, {"SOLAR": .8, "LIGHT": .35}), "track": (1.2, {"LOCATE": 1}),
    "tracking": (1.2, {"LOCATE": 1}), "locate": (1.2, {"LOCATE": 1}),
    "locating": (1.2, {"LOCATE": 1}), "lost": (0.8, {"LOCATE": .7}), "pet": (1.0, {"PET": 1}),
    "pets": (1.0, {"PET": 1}), "rfid": (1.2, {"RFID": 1}), "tag": (1.0, {"RFID": .6, "ELECTRONIC": .3}),
    "gps": (1.0, {"LOCATE": .6, "ELECTRONIC": .5}), "module": (0.8, {"ELECTRONIC": 1}),
    "secure": (1.2, {"SECURE": 1}), "luggage": (1.0, {"TRAVEL": 1}),
    "access": (0.8, {"SECURE": .7, "RFID": .3}), "combination": (1.0, {"SECURE": .6, "PART": .4}),
    "dial": (1.0, {"PART": 1}), "keys": (0.8, {"SECURE": .4, "HOME": .4}),
    "chip": (0.8, {"ELECTRONIC": 1}), "speed": (0.3, {}), "grocery": (1.0, {"SHOP": 1}),
    "checkout": (1.2, {"SHOP": 1}), "reader": (1.0, {"RFID": .5, "ELECTRONIC": .5}),
    "wake": (1.2, {"ALERT": 1}), "coffee": (2.0, {"HOT": 1}), "alarm": (1.0, {"ALERT": 1}),
    "send": (0.4, {}), "vital": (1.5, {"HEALTH": 1}), "data": (0.8, {"DATA": .6, "HEALTH": .5}),
    "programmable": (0.8, {"TIMER": .6, "ELECTRONIC": .4}), "timer": (1.0, {"TIMER": 1}),
    "drip": (0.8, {"HEAT": .5, "KITCHEN": .5}), "brewer": (1.0, {"HEAT": .6, "KITCHEN": .6}),
    "schedule": (0.8, {"ALERT": .6, "TIME": .5}), "alert": (1.2, {"ALERT": 1}),
    "alerts": (1.2, {"ALERT": 1}), "morning": (1.0, {"ALERT": .7, "TIME": .6}),
    "dispense": (1.2, {"MED": 1}), "pills": (1.0, {"MED": 1}),
    "thermal": (1.0, {"HEAT": 1}), "carafe": (0.8, {"HEAT": .5, "KITCHEN": .5}),
    "remind": (1.2, {"ALERT": 1}), "every": (0.2, {}), "day": (0.4, {"TIME": 1}),
    "keep": (0.3, {}), "tea": (1.5, {"HOT": 1}), "hot": (1.0, {"HOT": .7, "HEAT": .5}),
    "real-time": (0.8, {"HEALTH": .4, "TIME": .4, "DATA": .3}), "health": (1.5, {"HEALTH": 1}),
    "checker": (1.0, {"HEALTH": .6, "SENSOR": .3}), "weight": (0.8, {"SENSOR": .5, "HEALTH": .3}),
    "notify": (1.2, {"ALERT": 1}), "caregivers": (0.6, {"ALERT": .3, "MED": .3}),
    "deliver": (0.6, {"MED": .5}), "medicine": (1.0, {"MED": 1}), "doses": (1.0, {"MED": 1}),
    "continuously": (0.4, {"TIME": 1}), "monitor": (1.0, {"HEALTH": .7, "SENSOR": .3}),
    "glucose": (1.0, {"HEALTH": .7, "MED": .4}), "skin": (0.8, {"HEALTH": .5, "SENSOR": .3}),
    "patch": (0.8, {"SENSOR": .4, "MED": .3}), "bluetooth": (1.0, {"WIRELESS": 1}),
    "radio": (1.0, {"WIRELESS": 1}), "sound": (0.8, {"ALERT": .6, "SOUND": .5}),
    "reminder": (1.2, {"ALERT": 1}), "heart": (1.2, {"HEALTH": 1}), "rate": (0.6, {"HEALTH": .5}),
    "monitoring": (1.0, {"HEALTH": .7, "SENSOR": .3}), "optical": (1.0, {"SENSOR": .6, "LIGHT": .25}),
    "heating": (1.0, {"HEAT": 1}), "coil": (0.8, {"HEAT": .5, "ELECTRONIC": .3}),
    "brew": (1.2, {"HOT": .8, "HEAT": .3}), "fresh": (0.3, {}), "inject": (1.2, {"MED": 1}),
    "insulin": (1.0, {"MED": .8, "HEALTH": .3}), "smart": (0.4, {"ELECTRONIC": 1}),
    "speaker": (1.0, {"WIRELESS": .5, "SOUND": .7}), "make": (0.3, {}),
    "element": (0.8, {"HEAT": .4, "ELECTRONIC": .4}), "distance": (0.8, {"LOCATE": .4, "SPORT": .5}),
    "walked": (0.8, {"SPORT": .6}), "accelerometer": (1.0, {"SENSOR": .6, "MOTION": .5}),
    "devices": (0.8, {"DEVICE": 1}), "go": (0.3, {}), "lithium": (1.0, {"POWER": .5, "ELECTRONIC": .5}),
    "wireless": (1.0, {"WIRELESS": .6, "POWER": .3}), "car": (0.6, {"TRAVEL": .6}),
    "windows": (0.6, {"HOME": 1}), "suction": (1.0, {"PUMP": .6, "PART": .4}),
    "pads": (1.0, {"PART": 1}), "microfiber": (1.0, {"CLEAN": .4, "PART": .5}),
    "shoes": (0.6, {"HOME": 1}), "rotating": (1.0, {"MOTION": .6, "PART": .4}),
    "brushes": (1.0, {"CLEAN": .4, "PART": .5}), "learning": (1.2, {"LEARN": 1}),
    "place": (0.8, {"LEARN": .5}), "values": (0.8, {"LEARN": .5}), "foam": (1.0, {"PART": 1}),
    "tiles": (1.0, {"PART": 1}), "fold": (1.0, {"HOME": .6}), "laundry": (1.0, {"HOME": .8, "CLEAN": .3}),
    "hinged": (1.0, {"PART": 1}), "boards": (1.0, {"PART": 1}),
}

STOPWORDS = set("""i me my myself we our ours ourselves you you're you've you'll you'd your yours
yourself yourselves he him his himself she she's her hers herself it it's its itself they them
their theirs themselves what which who whom this that that'll these those am is are was were be
been being have has had having do does did doing a an the and but if or because as until while of
at by for with about against between into through during before after above below to from up down
in out on off over under again further then once here there when where why how all any both each
few more most other some such no nor not only own same so than too very s t can will just don
don't should should've now d ll m o re ve y""".split())

PUNCT = set("!\"#$%&()*+,./:;<=>?@[\\]^_`{|}~")


def tokenize(text):
    out = []
    for chunk in text.split():
        token = ""
        for i, ch in enumerate(chunk):
            inner = ch in "-'" and 0 < i < len(chunk) - 1
            if (ch in PUNCT or ch in "-'") and not inner:
                if token:
                    out.append(token)
                    token = ""
                out.append(ch)
            else:
                token += ch
        if token:
            out.append(token)
    return out


def parse_markup(marked):
    text, spans = "", []
    for m in re.finditer(r"\[([PM]):([^\]]+)\]|([^\[]+)", marked):
        if m.group(3) is not None:
            text += m.group(3)
            continue
        start = len(text)
        text += m.group(2)
        spans.append({"start": start, "end": len(text),
                      "label": "purpose" if m.group(1) == "P" else "mechanism"})
    return text, spans


def build_vectors(vocab, rng):
    basis, _ = np.linalg.qr(rng.standard_normal((DIM, DIM)))
    topic_dir = {t: basis[:, i] for i, t in enumerate(TOPICS)}
    spare = [basis[:, i] for i in range(len(TOPICS), DIM)]
    vectors = {}
    for word in vocab:
        norm, mix = LEXICON.get(word, (0.7, {}))
        if mix:
            v = sum(w * topic_dir[t] for t, w in mix.items())
        else:
            # own random direction, mostly outside the topic subspace
            v = rng.standard_normal(DIM) * 0.3 + spare[rng.integers(len(spare))]
        v = v / np.linalg.norm(v)
        v = v + rng.standard_normal(DIM) * (0.04 / np.sqrt(DIM))
        vectors[word] = norm * v / np.linalg.norm(v)
    return vectors


def main():
    rng = np.random.default_rng(20260401)
    docs, vocab = [], set()
    for doc_id, title, marked in PRODUCTS:
        text, spans = parse_markup(marked)
        docs.append({"id": doc_id, "title": title, "text": text, "spans": spans, "source": "gold"})
        for tok in tokenize(text.lower()) + tokenize(title.lower()):
            if not all(c in PUNCT or c in "-'" for c in tok):
                vocab.add(tok)
    vocab |= set(LEXICON)
    vocab = sorted(vocab)
    missing = sorted(w for d in docs for s in d["spans"]
                     for w in tokenize(d["text"][s["start"]:s["end"]].lower())
                     if w not in LEXICON and w not in STOPWORDS and w not in PUNCT)
    if missing:
        raise SystemExit("span words without a topic mix: " + ", ".join(sorted(set(missing))))
    vectors = build_vectors(vocab, rng)

    with open(HERE / "corpus.jsonl", "w") as f:
        for d in docs:
            f.write(json.dumps(d) + "\n")
    with open(HERE / "vectors.txt", "w") as f:
        for w in vocab:
            f.write(w + " " + " ".join("%.6f" % x for x in vectors[w]) + "\n")

    # precomputed span vectors stand in for an external encoder: the same
    # averaging, nudged by a fixed perturbation so they differ from the table
    with open(HERE / "span_vectors.jsonl", "w") as f:
        for d in docs:
            for i, s in enumerate(d["spans"]):
                words = [w for w in tokenize(d["text"][s["start"]:s["end"]].lower())
                         if w not in STOPWORDS and w in vectors]
                v = np.mean([vectors[w] for w in words], axis=0)
                v = v / np.linalg.norm(v) + rng.standard_normal(DIM) * 0.02
                v = v / np.linalg.norm(v)
                f.write(json.dumps({"doc_id": d["id"], "span_index": i,
                                    "vector": [round(float(x), 6) for x in v]}) + "\n")

    queries = [
        {"query_id": "light-not-light", "mechanism": ["light"], "not_purpose": ["light"]},
        {"query_id": "solar-not-power", "mechanism": ["solar energy"],
         "not_purpose": ["generating power"]},
        {"query_id": "water-not-cleaning-drinking", "mechanism": ["water"],
         "not_purpose": ["cleaning", "drinking"]},
        {"query_id": "rfid-not-locating-tracking", "mechanism": ["RFID"],
         "not_purpose": ["locating", "tracking"]},
        {"query_id": "light-for-cleaning", "mechanism": ["light"], "purpose": ["cleaning"]},
    ]
    judged = {
        "light-not-light": {"q04-uv-phone-sanitizer": 1, "q05-billiard-laser": 1,
                            "q06-uv-barbell-box": 1, "q01-desk-lamp": 0, "q02-night-light": 0},
        "solar-not-power": {"q03-solar-bulbs": 1, "q11-hydrogen-lighter": 1,
                            "q08-solar-generator": 0, "q07-solar-charger": 0},
        "water-not-cleaning-drinking": {"q11-hydrogen-lighter": 1, "q09-water-filter": 0,
                                        "q10-dish-washer": 0},
        "rfid-not-locating-tracking": {"q13-rfid-luggage-lock": 1, "q15-rfid-checkout": 1,
                                       "q12-rfid-pet-tracker": 0, "q14-rfid-key-finder": 0},
        "light-for-cleaning": {"q06-uv-barbell-box": 1, "q04-uv-phone-sanitizer": 1,
                               "q01-desk-lamp": 0, "q02-night-light": 0},
    }
    with open(HERE / "queries.jsonl", "w") as f:
        for q in queries:
            f.write(json.dumps(q) + "\n")
    with open(HERE / "judgments.jsonl", "w") as f:
        for qid, labels in judged.items():
            for doc_id, rel in labels.items():
                f.write(json.dumps({"query_id": qid, "doc_id": doc_id, "relevant": rel,
                                    "method": "pool"}) + "\n")

    abstractions = [
        {"seed": "morning medicine reminder",
         "spans": ["timed prompt", "daily routine cue", "scheduled notice", "health habit",
                   "early signal"]},
        {"seed": "fold laundry", "spans": ["flatten fabric", "stack clothes", "crease garments"]},
    ]
    with open(HERE / "abstractions.jsonl", "w") as f:
        for a in abstractions:
            f.write(json.dumps(a) + "\n")

    tokens = purpose = mechanism = 0
    for d in docs:
        tokens += len(tokenize(d["text"]))
        for s in d["spans"]:
            n = len(tokenize(d["text"][s["start"]:s["end"]]))
            if s["label"] == "purpose":
                purpose += n
            else:
                mechanism += n
    print("docs=%d tokens=%d purpose=%.1f%% mechanism=%.1f%%"
          % (len(docs), tokens, 100.0 * purpose / tokens, 100.0 * mechanism / tokens))


if __name__ == "__main__":
    main()
