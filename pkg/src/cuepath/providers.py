"""Text-generation providers.

RemoteProvider talks to any chat-completion style HTTP endpoint.
TemplateProvider is the offline stand-in: a seeded corpus of career content
that emits the same JSON payloads a remote model would, so every parser and
validator downstream runs against it unchanged. Its output is a pure
function of (seed, prompt), which is what makes offline runs replayable.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass

import httpx

from .errors import GenerationError, TransportError

DEFAULT_TEMPERATURE = 0.8
DEFAULT_TIMEOUT_S = 30.0
DEFAULT_TOKEN_ENV = "CUEPATH_API_TOKEN"

# Sentiment mix for template-generated random events.
P_POSITIVE = 0.40
P_NEUTRAL = 0.25
P_NEGATIVE = 0.25
P_CHANGE = 0.10


class Provider(ABC):
    """A text-generation backend: one prompt in, one raw completion out."""

    name: str = "provider"

    @abstractmethod
    def submit(self, prompt: str) -> str:
        """Return the raw completion text for the prompt."""


class RemoteProvider(Provider):
    """Chat-completion HTTP client (single user message per request)."""

    name = "remote"

    def __init__(
        self,
        base_url: str,
        model: str,
        *,
        token_env: str = DEFAULT_TOKEN_ENV,
        timeout_s: float = DEFAULT_TIMEOUT_S,
        temperature: float = DEFAULT_TEMPERATURE,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.token_env = token_env
        self.timeout_s = timeout_s
        self.temperature = temperature

    def submit(self, prompt: str) -> str:
        headers = {"Content-Type": "application/json"}
        token = os.environ.get(self.token_env, "")
        if token:
            headers["Authorization"] = f"Bearer {token}"
        body = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.temperature,
        }
        try:
            response = httpx.post(
                f"{self.base_url}/chat/completions",
                json=body,
                headers=headers,
                timeout=self.timeout_s,
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"provider request failed: {exc}") from exc
        if response.status_code != 200:
            raise TransportError(f"provider returned HTTP {response.status_code}")
        try:
            return response.json()["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise TransportError(f"malformed completion response: {exc}") from exc


# --------------------------------------------------------------------------
# Template provider corpus
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class _Track:
    key: str
    display: str
    field: str
    keywords: tuple[str, ...]
    milestones: tuple[tuple[str, str], ...]  # one per round, cycled
    skills: tuple[tuple[str, str], ...]


_TRACKS = (
    _Track(
        key="research",
        display="Research",
        field="research",
        keywords=("phd", "research", "professor", "academia", "academic", "thesis",
                  "postdoc", "lab", "scientist", "hci", "master's", "masters", "grad"),
        milestones=(
            ("Join a Research Group", "You earn a place in a lab whose agenda matches your interests. Weekly reading groups and your first literature review pull you into real research conversations."),
            ("First Paper Submission", "Months of experiments condense into your first manuscript. You submit to a peer-reviewed venue and learn how much rigor the final mile demands."),
            ("Present at a Conference", "Your work is accepted and you travel to present it. Hallway conversations turn strangers into collaborators and sharpen your sense of the field."),
            ("Lead Your Own Study", "You move from helping on other projects to owning a study end to end. Scoping, ethics review, and recruitment all land on your desk at once."),
            ("Publish in a Strong Venue", "A revised version of your work clears review at a venue people in your area actually read. Citations trickle in and your name starts to circulate."),
            ("Secure the Next Position", "Applications, talks, and interviews finally converge into an offer. The next stage of your research career has a start date."),
        ),
        skills=(
            ("Literature Review", "Learn to survey a research area systematically and synthesize what is known. This keeps your work grounded and reveals the gaps worth attacking."),
            ("Experimental Design", "Master controls, conditions, and power analysis before collecting a single data point. Well-designed studies save months of wasted effort."),
            ("Academic Writing", "Practice structuring arguments, figures, and related work into a readable paper. Clear writing is how research travels."),
            ("Statistical Analysis", "Acquire the tests and models your field expects, and the judgment for when each applies. Reviewers notice both their presence and their absence."),
            ("Grant Craft", "Learn to frame problems in terms funders care about. Budgets and aims pages are their own genre."),
            ("Peer Review", "Review other manuscripts carefully and diplomatically. Seeing common failure modes improves your own submissions."),
        ),
    ),
    _Track(
        key="engineering",
        display="Engineering",
        field="software engineering",
        keywords=("engineer", "engineering", "developer", "programming", "software",
                  "firmware", "backend", "frontend", "coding", "devops"),
        milestones=(
            ("Ship Your First Feature", "You take a small feature from ticket to production. Code review is humbling, but watching real users touch your work is worth it."),
            ("Own a Service", "You become the go-to person for one production service. On-call rotations teach you how systems actually fail."),
            ("Lead a Project", "You coordinate a multi-person effort for the first time. Estimates, trade-offs, and status updates become part of your vocabulary."),
            ("Harden the Stack", "A painful outage turns into a quarter of reliability work. You emerge with better tests, better dashboards, and a calmer pager."),
            ("Mentor and Multiply", "Two junior engineers are assigned to you. Teaching them forces you to articulate what you only half-knew you knew."),
            ("Step Up a Level", "A promotion or a new role lands after a strong review cycle. Your scope now includes shaping what gets built, not just building it."),
        ),
        skills=(
            ("Code Review Fluency", "Learn to give and receive review feedback that improves the code without bruising the author. Tone and specificity both matter."),
            ("System Design", "Practice decomposing requirements into services, queues, and stores. Whiteboard fluency translates directly into better architectures."),
            ("Debugging Discipline", "Build the habit of bisecting, instrumenting, and reproducing before guessing. Systematic debugging beats intuition at two in the morning."),
            ("Testing Strategy", "Learn which tests pay rent: unit, integration, property, and end-to-end. Confidence to refactor comes from coverage that means something."),
            ("Performance Profiling", "Measure before optimizing and learn where your profiler lies. Most speedups come from the two hot spots you did not suspect."),
            ("Incident Response", "Practice calm triage, clear communication, and blameless postmortems. Outages are inevitable; chaos is optional."),
        ),
    ),
    _Track(
        key="design",
        display="Design",
        field="design",
        keywords=("design", "designer", "ux", "ui", "creative", "illustration", "product design"),
        milestones=(
            ("Build a Portfolio Piece", "You complete a case study that actually shows your thinking. Framing the problem turns out to be harder than drawing the screens."),
            ("First Client Handoff", "Your design survives contact with engineering and ships. The gap between mockup and product teaches you to annotate everything."),
            ("Run a Design Sprint", "You facilitate a full sprint with stakeholders in the room. Sticky notes, dot votes, and a tested prototype by Friday."),
            ("Establish a Design System", "You consolidate scattered screens into a coherent component library. Consistency stops being a debate and starts being a default."),
            ("Lead a Redesign", "A flagship flow is yours to rethink end to end. Research, iteration, and hard trade-offs produce something measurably better."),
            ("Define the Vision", "You present a north-star design that aligns the team's roadmap. Your work now shapes what the product wants to become."),
        ),
        skills=(
            ("User Interviews", "Learn to ask open questions and stay quiet while people answer. What users do and what they say diverge in instructive ways."),
            ("Prototyping Speed", "Get fast at turning ideas into clickable artifacts. Cheap prototypes let you be wrong early, when it costs nothing."),
            ("Visual Hierarchy", "Train your eye for spacing, contrast, and emphasis. Good hierarchy makes interfaces feel obvious instead of explained."),
            ("Usability Testing", "Learn to script tasks, recruit participants, and watch without leading. Five users will humble any design."),
            ("Design Critique", "Practice framing critique around goals rather than taste. A strong critique culture multiplies a team's quality."),
            ("Accessibility Basics", "Learn contrast ratios, focus order, and screen-reader flows. Designing for the edges improves the middle."),
        ),
    ),
    _Track(
        key="data",
        display="Data Science",
        field="data science",
        keywords=("data", "analytics", "statistics", "statistician", "machine learning", "ml", "ai"),
        milestones=(
            ("First End-to-End Analysis", "You take a messy dataset from ingestion to a finding someone acts on. Cleaning the data takes four times longer than modeling it."),
            ("Ship a Model", "Your first model goes into production behind a real endpoint. Monitoring drift teaches you that deployment is the beginning, not the end."),
            ("Own the Metrics", "You define and defend the team's core metrics. Every dashboard argument becomes your argument."),
            ("Run an Experiment Program", "You stand up a proper split-test pipeline. Decisions start citing confidence intervals instead of opinions."),
            ("Scale the Pipeline", "Data volume outgrows the old stack and you rebuild it. The new pipeline is boring in the best possible way."),
            ("Direct the Roadmap", "Your analyses now decide what the team builds next quarter. You have become the person executives ask what the data says."),
        ),
        skills=(
            ("Query Mastery", "Go beyond basic queries into window functions and execution plans. Most data questions die or thrive at the query layer."),
            ("Data Visualization", "Learn which chart answers which question and when a table beats both. Honest visuals build trust in your analysis."),
            ("Feature Engineering", "Practice turning raw signals into inputs models can use. Domain sense here often beats a fancier algorithm."),
            ("Causal Reasoning", "Learn the difference between correlation, confounding, and causation. Experiments and natural experiments become your instruments."),
            ("Pipeline Engineering", "Build reliable, observable data flows with tests and alerts. Analyses are only as good as the freshness of their inputs."),
            ("Model Evaluation", "Master baselines, cross-validation, and error analysis. Knowing exactly how a model fails is worth more than its headline score."),
        ),
    ),
    _Track(
        key="general",
        display="Career Growth",
        field="your field",
        keywords=(),
        milestones=(
            ("Find Your Footing", "You map the landscape of your field and pick a direction. A concrete plan replaces a vague ambition."),
            ("First Real Win", "A project you drove lands visibly well. People start associating your name with finished work."),
            ("Grow Your Network", "Conferences, communities, and a few cold messages turn into real relationships. Opportunities start arriving through people, not postings."),
            ("Take On More", "You volunteer for the assignment nobody wanted and make it work. Your responsibilities expand to match."),
            ("Become the Specialist", "Colleagues now route questions in your area to you. Depth is paying off where breadth could not."),
            ("Reach the Goal Marker", "The two-year target you set is suddenly in reach. What felt aspirational now reads like a schedule."),
        ),
        skills=(
            ("Clear Writing", "Practice stating the point first and cutting every sentence that does not serve it. Written clarity compounds across every role."),
            ("Public Speaking", "Learn to structure a talk and rehearse until the nerves are boring. Visibility follows people who can explain things."),
            ("Time Budgeting", "Track where your weeks actually go and defend the deep-work blocks. Output follows attention."),
            ("Negotiation", "Practice asking for scope, resources, and compensation with evidence in hand. The worst realistic outcome is usually a polite no."),
            ("Professional Networking", "Learn to maintain weak ties with occasional, genuine check-ins. Most opportunities travel through acquaintances."),
            ("Self Review", "Build the habit of writing down what worked and what did not each month. Honest retrospectives turn experience into skill."),
        ),
    ),
)

_TRACK_BY_DISPLAY = {t.display.lower(): t for t in _TRACKS}

_POSITIVE_EVENTS = (
    ("Unexpected Mentor", "A senior person in {field} takes an interest in your work and offers regular guidance. Their feedback shortcuts months of trial and error."),
    ("Small Grant Awarded", "A modest pot of money lands to support your current push in {field}. It buys equipment, time, and a little legitimacy."),
    ("Work Gets Noticed", "Something you made circulates further than expected. Strangers reference it back to you at exactly the right moments."),
    ("Team Wins Together", "A group effort you contributed to succeeds publicly. The shared win strengthens every relationship involved."),
    ("Offer of Collaboration", "Someone whose work you respect proposes joining forces. The partnership widens what you can attempt in {field}."),
)

_NEUTRAL_EVENTS = (
    ("Reorganization Around You", "Teams shuffle and reporting lines move, leaving your day-to-day oddly untouched. You spend a week updating documents and then life resumes."),
    ("Conference Postponed", "An event you planned around moves to next season. The preparation keeps; only the calendar moves."),
    ("New Tools Mandated", "The organization standardizes on a different toolchain for {field}. Two weeks of friction, then it is simply the new normal."),
    ("A Quiet Stretch", "Nothing urgent lands for a while and the pace slows. You catch up on reading and maintenance that loud months never allow."),
    ("Office Relocation", "Your workspace moves across town. The commute takes a new shape; the work does not."),
)

_NEGATIVE_EVENTS = (
    ("Funding Cut", "Budgets tighten and support for your current direction in {field} shrinks. You scramble to keep the essential parts alive."),
    ("Project Cancelled", "Months of your work are shelved by a decision made two levels above you. Salvaging the reusable pieces is cold comfort."),
    ("Burnout Warning", "Deadlines stack until sleep and focus start to fray. You are forced to slow down and rebuild sustainable habits."),
    ("Key Ally Departs", "The colleague who championed your work leaves for another organization. Doors they held open now need reopening by hand."),
    ("Public Setback", "A visible attempt in {field} falls flat in front of people whose opinion matters. The lesson is real, and so is the sting."),
)

_CHANGE_EVENTS = (
    ("A Different Path Beckons", "A side project keeps pulling your attention away from {field}. You begin to wonder whether {to} is where the next two years should actually go."),
    ("Recruited Elsewhere", "An unexpected conversation turns into a concrete invitation to move toward {to}. Saying yes would redraw your map of {field}."),
    ("Borrowed Role Fits", "Covering for a colleague, you spend a month doing {to} work. It fits disturbingly well, and now you know it."),
)

# Deliberately vague 2-6 word hints; none contain a sentiment word.
_HINTS = (
    "whispers emerge",
    "fog lifts slowly",
    "unknown beckons",
    "silence speaks",
    "doors appear",
    "winds shift",
    "a letter arrives",
    "paths fork quietly",
    "embers glow faintly",
    "tides turn unseen",
    "a door stands ajar",
    "threads weave together",
    "shadows and light mingle",
    "the map runs out",
    "footsteps echo ahead",
    "seeds wait underground",
    "a bridge half built",
    "clouds drift past",
    "strange stars align",
    "the compass trembles",
    "ripples reach the shore",
    "an unmarked trail",
    "glass reflects tomorrow",
    "the dice are cast",
)

_NEXT_STEPS = (
    "Write down the two-year goal again and revise it against what the journey revealed.",
    "Pick the strongest skill gained and find a project that stretches it further.",
    "Reconnect with the people met along the way; one conversation per week is enough.",
    "Schedule a monthly retrospective to catch drift early.",
    "Identify the next milestone-sized commitment and put a date on it.",
    "Document the setbacks and what absorbed them; resilience is reusable.",
    "Teach someone else the most valuable thing learned; it will sharpen it.",
    "Budget explicit time for exploration so the next direction is chosen, not stumbled into.",
)

_ROUND_INDEX_RE = re.compile(r"generating milestone(\d+)")
_PROFILE_RE = re.compile(r"^User's profile: (.+)$", re.MULTILINE)
_POCKETED_SECTION_RE = re.compile(
    r"^All pocketed events so far: (.*?)\n^Past experiences:", re.MULTILINE | re.DOTALL
)
_ACCEPTED_RE = re.compile(r"^Accepted direction changes: (.+)$", re.MULTILINE)
_LAST_TITLE_RE = re.compile(r"- (?:Milestone|Random|Skill): (.+?) \|")
_JOURNEY_SECTION_RE = re.compile(
    r"Complete journey \(all pocketed events\): (.*?)\nProvide insightful analysis", re.DOTALL
)


def _stable_rng(seed: int, prompt: str) -> random.Random:
    digest = hashlib.sha256(f"{seed}\n{prompt}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _match_track(text: str) -> _Track:
    lowered = text.lower()
    for track in _TRACKS:
        for kw in track.keywords:
            if re.search(rf"\b{re.escape(kw)}\b", lowered):
                return track
    return _TRACKS[-1]  # general


class TemplateProvider(Provider):
    """Deterministic offline provider backed by a parameterized corpus.

    Recognizes the two prompt families (round generation and journey
    report) by their distinctive anchors and answers each with a JSON
    payload shaped exactly like a well-behaved remote model's.
    """

    name = "template"

    def __init__(self, seed: int = 0):
        self.seed = seed

    def submit(self, prompt: str) -> str:
        if '"careerAnalysis"' in prompt:
            return self._report_payload(prompt)
        if _ROUND_INDEX_RE.search(prompt):
            return self._round_payload(prompt)
        raise GenerationError("template provider does not recognize this prompt")

    # -- round generation ---------------------------------------------------

    def _round_payload(self, prompt: str) -> str:
        rng = _stable_rng(self.seed, prompt)
        round_index = int(_ROUND_INDEX_RE.search(prompt).group(1))
        track = self._pick_track(prompt)
        last_title = self._last_pocketed_title(prompt)

        m_title, m_body = track.milestones[(round_index - 1) % len(track.milestones)]
        if last_title:
            m_body = f'Building on "{last_title}", the next stage takes shape. {m_body}'

        hints = rng.sample(_HINTS, 6)
        payload: dict[str, str] = {
            f"bigEvent{round_index}": f"title: {m_title} | {m_body}",
        }

        sentiments = [self._draw_sentiment(rng) for _ in range(3)]
        if all(s == "Positive" for s in sentiments):
            sentiments[2] = "Neutral"  # keep the outcome mix honest
        used: set[str] = set()
        for slot, sentiment in enumerate(sentiments, start=1):
            title, body, label = self._random_event(rng, track, sentiment, used)
            payload[f"randomEvent{round_index}-{slot}"] = f"title: {title} | {body} [{label}]"
            payload[f"randomEvent{round_index}-{slot}-hint"] = hints[slot - 1]

        for slot, (title, body) in enumerate(rng.sample(track.skills, 3), start=1):
            payload[f"skill{round_index}-{slot}"] = f"title: {title} | {body}"
            payload[f"skill{round_index}-{slot}-hint"] = hints[slot + 2]

        return json.dumps(payload, ensure_ascii=False, indent=2)

    def _pick_track(self, prompt: str) -> _Track:
        # Accepted direction changes steer the corpus to the new track.
        accepted = _ACCEPTED_RE.search(prompt)
        if accepted and accepted.group(1).strip() != "None":
            last_target = accepted.group(1).split(";")[-1].split("→")[-1].strip()
            track = _TRACK_BY_DISPLAY.get(last_target.lower())
            if track is not None:
                return track
            matched = _match_track(last_target)
            if matched.key != "general":
                return matched
        profile = _PROFILE_RE.search(prompt)
        return _match_track(profile.group(1)) if profile else _TRACKS[-1]

    def _last_pocketed_title(self, prompt: str) -> str | None:
        section = _POCKETED_SECTION_RE.search(prompt)
        if not section or section.group(1).strip() == "None yet":
            return None
        titles = _LAST_TITLE_RE.findall(section.group(1))
        return titles[-1] if titles else None

    @staticmethod
    def _draw_sentiment(rng: random.Random) -> str:
        roll = rng.random()
        if roll < P_POSITIVE:
            return "Positive"
        if roll < P_POSITIVE + P_NEUTRAL:
            return "Neutral"
        if roll < P_POSITIVE + P_NEUTRAL + P_NEGATIVE:
            return "Negative"
        return "Change"

    def _random_event(
        self, rng: random.Random, track: _Track, sentiment: str, used: set[str]
    ) -> tuple[str, str, str]:
        if sentiment == "Change":
            pool = _CHANGE_EVENTS
        else:
            pool = {"Positive": _POSITIVE_EVENTS, "Neutral": _NEUTRAL_EVENTS,
                    "Negative": _NEGATIVE_EVENTS}[sentiment]
        candidates = [e for e in pool if e[0] not in used] or list(pool)
        title, body = rng.choice(candidates)
        used.add(title)
        if sentiment == "Change":
            target = rng.choice([t for t in _TRACKS if t.key not in (track.key, "general")])
            body = body.format(field=track.field, to=target.display)
            label = f"Change: {track.display} → {target.display}"
        else:
            body = body.format(field=track.field)
            label = sentiment
        return title, body, label

    # -- journey report -----------------------------------------------------

    def _report_payload(self, prompt: str) -> str:
        rng = _stable_rng(self.seed, prompt)
        section = _JOURNEY_SECTION_RE.search(prompt)
        journey = section.group(1).strip() if section else ""
        lines = [ln for ln in journey.splitlines() if ln.strip() and ln.strip() != "None"]
        titles = [ln.split(" | ")[0].strip() for ln in lines if " | " in ln]

        if titles:
            analysis = (
                f"Across {len(lines)} collected events, the journey ran from "
                f'"{titles[0]}" to "{titles[-1]}". The pattern is steady investment '
                "punctuated by setbacks that were absorbed rather than avoided. "
                "The skills gathered along the way now form a coherent base, and the "
                "milestones reached show real follow-through on the original goal."
            )
        else:
            analysis = (
                "The journey ended before any events were collected, which is itself "
                "informative: the cost of each attempt was weighed carefully. The next "
                "run can afford bolder, earlier commitments."
            )
        steps = rng.sample(_NEXT_STEPS, 4)
        suggestions = " ".join(f"{i}. {step}" for i, step in enumerate(steps, start=1))
        return json.dumps(
            {"careerAnalysis": analysis, "futureSuggestions": suggestions},
            ensure_ascii=False,
            indent=2,
        )


def make_provider(name: str, seed: int = 0) -> Provider:
    """Factory for the --provider selector ('template' or 'remote').

    Remote settings come from the environment: CUEPATH_REMOTE_URL,
    CUEPATH_REMOTE_MODEL, CUEPATH_TOKEN_ENV, CUEPATH_REMOTE_TIMEOUT.
    """
    if name == "template":
        return TemplateProvider(seed)
    if name == "remote":
        base_url = os.environ.get("CUEPATH_REMOTE_URL", "")
        if not base_url:
            raise GenerationError("CUEPATH_REMOTE_URL is not set")
        return RemoteProvider(
            base_url,
            os.environ.get("CUEPATH_REMOTE_MODEL", "gpt-4o"),
            token_env=os.environ.get("CUEPATH_TOKEN_ENV", DEFAULT_TOKEN_ENV),
            timeout_s=float(os.environ.get("CUEPATH_REMOTE_TIMEOUT", DEFAULT_TIMEOUT_S)),
            temperature=float(os.environ.get("CUEPATH_TEMPERATURE", DEFAULT_TEMPERATURE)),
        )
    raise GenerationError(f"unknown provider {name!r}")
