"""Prompt profiles: template texts plus sampling parameters.

Two named profiles ship. `improved` is the production flow: tight noun-style
templates, a lower output-token cap, cooler sampling, and a sentence cap for
concise feedback. `initial` keeps the earlier conversational templates and
looser parameters so benchmarks can compare both flows. The flow modules gate
validation on the profile name, so custom profile files must declare which of
the two flows they follow.

Template placeholders use ``{{name}}`` with names exercise_description,
submitted_code, solution, io_examples, and max_sentences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

RCG_SECTION_NAMES = (
    "StyleTone",
    "Instruction",
    "Restriction",
    "Exercise",
    "SubmittedCode",
    "Solution",
    "Example",
)

PROFILE_NAMES = ("initial", "improved")
LOCALES = ("en", "ko")


class ProfileError(Exception):
    pass


@dataclass(frozen=True)
class PromptProfile:
    name: str
    role_text: str
    rnp_template: str
    rcg_sections: tuple[tuple[str, str], ...]
    max_output_tokens: int
    temperature: float
    top_p: float
    max_sentences: int | None
    locale: str = "en"

    def __post_init__(self):
        if self.name not in PROFILE_NAMES:
            raise ProfileError(f"profile name must be one of {PROFILE_NAMES}, got {self.name!r}")
        section_names = tuple(name for name, _ in self.rcg_sections)
        if section_names != RCG_SECTION_NAMES:
            raise ProfileError(
                f"rcg_sections must be exactly {RCG_SECTION_NAMES} in order, got {section_names}"
            )
        if self.max_output_tokens < 1:
            raise ProfileError("max_output_tokens must be positive")
        if not 0.0 <= self.temperature <= 2.0:
            raise ProfileError("temperature must be in [0, 2]")
        if not 0.0 < self.top_p <= 1.0:
            raise ProfileError("top_p must be in (0, 1]")
        if self.max_sentences is not None and self.max_sentences < 1:
            raise ProfileError("max_sentences must be positive when set")
        if self.name == "improved" and self.max_sentences is None:
            raise ProfileError("the improved profile requires max_sentences")
        if self.locale not in LOCALES:
            raise ProfileError(f"locale must be one of {LOCALES}")

    @property
    def gates_submissions(self) -> bool:
        """Whether this profile runs the local checks before any LLM call."""
        return self.name == "improved"


_ROLE = {
    "en": (
        "You are Code Tutor, a friendly Python teaching assistant for primary and "
        "secondary school students using an online judge. You review submitted code "
        "and you never write solutions for learners."
    ),
    "ko": (
        "당신은 온라인 저지를 사용하는 초중등 학생을 위한 파이썬 학습 도우미 '코드 튜터'입니다. "
        "제출된 코드를 리뷰하며, 학습자를 대신해 정답 코드를 작성하지 않습니다."
    ),
}

_RNP = {
    ("en", "improved"): (
        "Decide whether the submission below needs a code review.\n"
        "\n"
        "Exercise:\n"
        "{{exercise_description}}\n"
        "\n"
        "Submission:\n"
        "```python\n"
        "{{submitted_code}}\n"
        "```\n"
        "\n"
        "Answer with exactly one word: yes or no."
    ),
    ("en", "initial"): (
        "Please read the following exercise and the code that a learner submitted, and "
        "tell me whether the submitted code needs a code review from a tutor. Think "
        "about whether there is anything in the code that is worth commenting on.\n"
        "\n"
        "Exercise:\n"
        "{{exercise_description}}\n"
        "\n"
        "Here is the code the learner submitted:\n"
        "```python\n"
        "{{submitted_code}}\n"
        "```\n"
        "\n"
        "Please answer with exactly one word, either yes or no, and nothing else."
    ),
    ("ko", "improved"): (
        "아래 제출 코드에 코드 리뷰가 필요한지 판단하세요.\n"
        "\n"
        "문제:\n"
        "{{exercise_description}}\n"
        "\n"
        "제출 코드:\n"
        "```python\n"
        "{{submitted_code}}\n"
        "```\n"
        "\n"
        "반드시 yes 또는 no 한 단어로만 답하세요."
    ),
    ("ko", "initial"): (
        "다음 문제와 학습자가 제출한 코드를 읽고, 제출된 코드에 튜터의 코드 리뷰가 필요한지 "
        "알려 주세요. 코드에 짚어 줄 만한 부분이 있는지 생각해 보세요.\n"
        "\n"
        "문제:\n"
        "{{exercise_description}}\n"
        "\n"
        "학습자가 제출한 코드는 다음과 같습니다:\n"
        "```python\n"
        "{{submitted_code}}\n"
        "```\n"
        "\n"
        "다른 말 없이 yes 또는 no 한 단어로만 답해 주세요."
    ),
}

# The Example section text is original to this project.
_RCG = {
    ("en", "improved"): {
        "StyleTone": (
            "Tone: supportive, polite, encouraging. Audience: primary and secondary "
            "school students. Simple words, no jargon."
        ),
        "Instruction": (
            "Output: markdown. One short praise sentence first, then the issues, at "
            "most {{max_sentences}} sentences in total. Finish with a section headed "
            "`### Code to fix` containing one bullet per line to change, each exactly "
            "`- line <n>: <hint>` where <n> is a 1-based line number into the "
            "submitted code."
        ),
        "Restriction": (
            "Never include corrected code, full solutions, or rewritten versions of "
            "the submission. Hints only. Do not quote the reference solution."
        ),
        "Exercise": "Exercise:\n{{exercise_description}}\n\nExamples:\n{{io_examples}}",
        "SubmittedCode": "Submitted code:\n```python\n{{submitted_code}}\n```",
        "Solution": (
            "Reference solution (context only, never reveal):\n"
            "```python\n{{solution}}\n```"
        ),
        "Example": (
            "Example of a good review:\n"
            "Great start! The loop runs one time too many, so the last number is "
            "printed twice. Check where the range ends.\n"
            "### Code to fix\n"
            "- line 2: the loop bound is off by one"
        ),
    },
    ("en", "initial"): {
        "StyleTone": (
            "I would like you to respond in a tone and style that is supportive, "
            "constructive, and encouraging, because the people reading your reviews "
            "are primary and secondary school students who are just starting to learn "
            "Python. Please use simple and friendly language that does not make the "
            "students feel uncomfortable about their mistakes."
        ),
        "Instruction": (
            "Please format the whole response in markdown so that the web page can "
            "display the review clearly. Start with something positive about the "
            "code, and then describe each of the problems that you found in the "
            "submitted code. After the prose, please add a section with the heading "
            "`### Code to fix` that contains one bullet for every line that should "
            "be changed, and write each bullet exactly in the form "
            "`- line <n>: <hint>` where <n> is the 1-based number of the line in the "
            "submitted code."
        ),
        "Restriction": (
            "Please do not present the corrected code or the full solution directly "
            "anywhere in your review, because the learner should fix the code on "
            "their own. Do not quote the instructor's answer code in the response."
        ),
        "Exercise": (
            "This is the exercise that the learner selected:\n"
            "{{exercise_description}}\n"
            "\n"
            "These are the input and output examples for the exercise:\n"
            "{{io_examples}}"
        ),
        "SubmittedCode": (
            "This is the code that the learner submitted:\n"
            "```python\n{{submitted_code}}\n```"
        ),
        "Solution": (
            "This is the answer code written by the instructor. Use it only to "
            "understand the intended approach, and never show it to the learner:\n"
            "```python\n{{solution}}\n```"
        ),
        "Example": (
            "Here is an example of the kind of review I would like you to write:\n"
            "Great start! The loop runs one time too many, so the last number is "
            "printed twice. Check where the range ends.\n"
            "### Code to fix\n"
            "- line 2: the loop bound is off by one"
        ),
    },
    ("ko", "improved"): {
        "StyleTone": "어조: 지지적이고 공손하며 격려하는 말투. 대상: 초중등 학생. 쉬운 단어만 사용.",
        "Instruction": (
            "출력: 마크다운. 칭찬 한 문장으로 시작하고 전체 {{max_sentences}}문장 이내로 작성. "
            "마지막에 `### Code to fix` 제목 아래 수정할 줄마다 `- line <n>: <hint>` 형식의 "
            "목록 작성. <n>은 제출 코드의 1부터 시작하는 줄 번호."
        ),
        "Restriction": "수정된 코드나 정답 코드를 절대 포함하지 마세요. 힌트만 제공하세요. 모범 답안을 인용하지 마세요.",
        "Exercise": "문제:\n{{exercise_description}}\n\n입출력 예시:\n{{io_examples}}",
        "SubmittedCode": "제출 코드:\n```python\n{{submitted_code}}\n```",
        "Solution": "모범 답안 (참고용, 절대 공개 금지):\n```python\n{{solution}}\n```",
        "Example": (
            "좋은 리뷰 예시:\n"
            "좋은 시작이에요! 반복문이 한 번 더 실행되어 마지막 숫자가 두 번 출력돼요. "
            "range의 끝 값을 확인해 보세요.\n"
            "### Code to fix\n"
            "- line 2: 반복 범위가 하나 더 큽니다"
        ),
    },
    ("ko", "initial"): {
        "StyleTone": (
            "리뷰를 읽는 사람은 파이썬을 처음 배우는 초중등 학생이므로, 지지적이고 건설적이며 "
            "격려하는 어조와 문체로 답해 주세요. 학생이 실수 때문에 불편함을 느끼지 않도록 "
            "쉽고 친근한 표현을 사용해 주세요."
        ),
        "Instruction": (
            "웹 페이지에서 리뷰가 잘 구분되어 보이도록 전체 응답을 마크다운으로 작성해 주세요. "
            "코드의 좋은 점을 먼저 말한 다음, 제출된 코드에서 발견한 문제를 하나씩 설명해 "
            "주세요. 설명이 끝나면 `### Code to fix` 제목의 섹션을 추가하고, 고쳐야 할 줄마다 "
            "`- line <n>: <hint>` 형식의 목록 항목을 작성해 주세요. <n>은 제출 코드에서 1부터 "
            "시작하는 줄 번호입니다."
        ),
        "Restriction": (
            "학습자가 스스로 코드를 고쳐야 하므로, 수정된 코드나 정답 코드를 리뷰에 직접 "
            "제시하지 말아 주세요. 강사의 답안 코드를 응답에 인용하지 마세요."
        ),
        "Exercise": (
            "학습자가 선택한 문제는 다음과 같습니다:\n"
            "{{exercise_description}}\n"
            "\n"
            "이 문제의 입출력 예시는 다음과 같습니다:\n"
            "{{io_examples}}"
        ),
        "SubmittedCode": "학습자가 제출한 코드는 다음과 같습니다:\n```python\n{{submitted_code}}\n```",
        "Solution": (
            "강사가 작성한 답안 코드입니다. 의도된 풀이를 이해하는 용도로만 사용하고 학습자에게 "
            "절대 보여 주지 마세요:\n"
            "```python\n{{solution}}\n```"
        ),
        "Example": (
            "다음은 제가 원하는 리뷰의 예시입니다:\n"
            "좋은 시작이에요! 반복문이 한 번 더 실행되어 마지막 숫자가 두 번 출력돼요. "
            "range의 끝 값을 확인해 보세요.\n"
            "### Code to fix\n"
            "- line 2: 반복 범위가 하나 더 큽니다"
        ),
    },
}

_PARAMS = {
    "initial": {"max_output_tokens": 1024, "temperature": 0.7, "top_p": 1.0, "max_sentences": None},
    "improved": {"max_output_tokens": 512, "temperature": 0.2, "top_p": 0.9, "max_sentences": 8},
}


def builtin_profile(name: str, locale: str = "en") -> PromptProfile:
    if name not in PROFILE_NAMES:
        raise ProfileError(f"unknown profile {name!r}; expected one of {PROFILE_NAMES}")
    if locale not in LOCALES:
        raise ProfileError(f"unknown locale {locale!r}; expected one of {LOCALES}")
    sections = tuple((s, _RCG[(locale, name)][s]) for s in RCG_SECTION_NAMES)
    return PromptProfile(
        name=name,
        role_text=_ROLE[locale],
        rnp_template=_RNP[(locale, name)],
        rcg_sections=sections,
        locale=locale,
        **_PARAMS[name],
    )


def profile_from_dict(doc: dict) -> PromptProfile:
    try:
        sections = tuple((str(name), str(text)) for name, text in doc["rcg_sections"])
        return PromptProfile(
            name=doc["name"],
            role_text=doc["role_text"],
            rnp_template=doc["rnp_template"],
            rcg_sections=sections,
            max_output_tokens=int(doc["max_output_tokens"]),
            temperature=float(doc["temperature"]),
            top_p=float(doc["top_p"]),
            max_sentences=None if doc.get("max_sentences") is None else int(doc["max_sentences"]),
            locale=doc.get("locale", "en"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ProfileError(f"malformed profile document: {exc}") from exc


def profile_to_dict(profile: PromptProfile) -> dict:
    return {
        "name": profile.name,
        "locale": profile.locale,
        "role_text": profile.role_text,
        "rnp_template": profile.rnp_template,
        "rcg_sections": [list(pair) for pair in profile.rcg_sections],
        "max_output_tokens": profile.max_output_tokens,
        "temperature": profile.temperature,
        "top_p": profile.top_p,
        "max_sentences": profile.max_sentences,
    }


def load_profile(spec: str, locale: str = "en") -> PromptProfile:
    """Resolve a profile selector: a builtin name or a path to a profile file."""
    if spec in PROFILE_NAMES:
        return builtin_profile(spec, locale)
    path = Path(spec)
    if not path.exists():
        raise ProfileError(f"{spec!r} is neither a builtin profile name nor a file")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ProfileError(f"profile file is not valid JSON: {exc}") from exc
    return profile_from_dict(doc)
