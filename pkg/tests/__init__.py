"""
협력 최적화 툴킷 테스트 모듈

- 문제 모델, 목적 함수, 파일 형식
- 인스턴스 생성기와 SplitMix64
- QOA 엔진과 연속 시간 진단
- 지역 탐색 / MRLS
- 비교 실험 하네스와 보고서
- 명령행 인터페이스와 통합 시나리오
"""
